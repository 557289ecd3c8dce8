//! Static SVG rendering: one path element per curve piece plus endpoint
//! markers, viewBox padded by 5 percent, y axis pointing up.

use pelastica::curves::ArcCurve;

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub fn render(curve: &ArcCurve) -> String {
    let xs = curve.samples.iter().map(|s| s.x);
    let ys = curve.samples.iter().map(|s| s.y);
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in xs {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
    }
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for y in ys {
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    let width = (x_max - x_min).max(1e-9);
    let height = (y_max - y_min).max(1e-9);
    let pad_x = 0.05 * width;
    let pad_y = 0.05 * height;
    // flip y so the curves render in mathematical orientation
    let fy = |y: f64| y_max + pad_y - y;
    let fx = |x: f64| x - x_min + pad_x;
    let view_w = width + 2.0 * pad_x;
    let view_h = height + 2.0 * pad_y;
    let stroke = 0.006 * view_w.max(view_h);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {view_w:.6} {view_h:.6}\">\n"
    ));
    let n = curve.samples.len();
    for (i, &start) in curve.piece_offsets.iter().enumerate() {
        let end = curve.piece_offsets.get(i + 1).copied().unwrap_or(n - 1);
        if end <= start {
            continue;
        }
        let mut d = String::new();
        for (j, smp) in curve.samples[start..=end].iter().enumerate() {
            let cmd = if j == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{cmd}{:.6} {:.6} ", fx(smp.x), fy(smp.y)));
        }
        out.push_str(&format!(
            "  <path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{stroke:.6}\"/>\n",
            d.trim_end(),
            COLORS[i % COLORS.len()]
        ));
    }
    for smp in [curve.samples.first(), curve.samples.last()].into_iter().flatten() {
        out.push_str(&format!(
            "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"#000\"/>\n",
            fx(smp.x),
            fy(smp.y),
            1.8 * stroke
        ));
    }
    out.push_str("</svg>\n");
    out
}
