//! Minimal line charts as standalone SVG: fixed 800x600 viewBox,
//! linear axes with five labeled ticks each, a legend, one polyline
//! per series.

pub struct Series<'a> {
    pub label: &'a str,
    pub ys: &'a [f64],
    pub color: &'a str,
    pub dashed: bool,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 770.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 540.0;
const TICKS: usize = 5;

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if !(1e-3..1e5).contains(&a) {
        return format!("{v:.2e}");
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn range_of(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    // pad so extreme points do not sit on the frame; a flat series
    // still gets a visible band
    let pad = 0.05 * (hi - lo).max(lo.abs().max(hi.abs()) * 0.05).max(1e-12);
    (lo - pad, hi + pad)
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, xs: &[f64], series: &[Series]) -> String {
    let (x_lo, x_hi) = range_of(xs.iter().copied());
    let (y_lo, y_hi) = range_of(series.iter().flat_map(|s| s.ys.iter().copied()));
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * (RIGHT - LEFT);
    let sy = |y: f64| BOTTOM - (y - y_lo) / (y_hi - y_lo) * (BOTTOM - TOP);

    let mut doc = String::with_capacity(4096);
    doc.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\">\n"
    ));
    doc.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" fill=\"white\"/>\n"
    ));
    doc.push_str(&format!(
        "<text x=\"{:.0}\" y=\"28\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"18\">{title}</text>\n",
        WIDTH / 2.0
    ));

    for i in 0..TICKS {
        let f = i as f64 / (TICKS - 1) as f64;
        let xv = x_lo + f * (x_hi - x_lo);
        let yv = y_lo + f * (y_hi - y_lo);
        let px = sx(xv);
        let py = sy(yv);
        doc.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{TOP:.0}\" x2=\"{px:.2}\" y2=\"{BOTTOM:.0}\" \
             stroke=\"#dddddd\"/>\n"
        ));
        doc.push_str(&format!(
            "<line x1=\"{LEFT:.0}\" y1=\"{py:.2}\" x2=\"{RIGHT:.0}\" y2=\"{py:.2}\" \
             stroke=\"#dddddd\"/>\n"
        ));
        doc.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.0}\" text-anchor=\"middle\" font-family=\"monospace\" \
             font-size=\"13\">{}</text>\n",
            BOTTOM + 22.0,
            tick_label(xv)
        ));
        doc.push_str(&format!(
            "<text x=\"{:.0}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"monospace\" \
             font-size=\"13\">{}</text>\n",
            LEFT - 8.0,
            py + 4.0,
            tick_label(yv)
        ));
    }

    doc.push_str(&format!(
        "<rect x=\"{LEFT:.0}\" y=\"{TOP:.0}\" width=\"{:.0}\" height=\"{:.0}\" fill=\"none\" \
         stroke=\"black\"/>\n",
        RIGHT - LEFT,
        BOTTOM - TOP
    ));
    doc.push_str(&format!(
        "<text x=\"{:.0}\" y=\"{:.0}\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"14\">{x_label}</text>\n",
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 14.0
    ));
    doc.push_str(&format!(
        "<text x=\"22\" y=\"{:.0}\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"14\" transform=\"rotate(-90 22 {:.0})\">{y_label}</text>\n",
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0
    ));

    for s in series {
        let pts: Vec<String> = xs
            .iter()
            .zip(s.ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let dash = if s.dashed { " stroke-dasharray=\"8 5\"" } else { "" };
        doc.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{dash}/>\n",
            pts.join(" "),
            s.color
        ));
    }

    for (i, s) in series.iter().enumerate() {
        let y = TOP + 18.0 + 20.0 * i as f64;
        let dash = if s.dashed { " stroke-dasharray=\"8 5\"" } else { "" };
        doc.push_str(&format!(
            "<line x1=\"{:.0}\" y1=\"{y:.0}\" x2=\"{:.0}\" y2=\"{y:.0}\" stroke=\"{}\" \
             stroke-width=\"1.8\"{dash}/>\n",
            RIGHT - 150.0,
            RIGHT - 126.0,
            s.color
        ));
        doc.push_str(&format!(
            "<text x=\"{:.0}\" y=\"{:.0}\" font-family=\"monospace\" font-size=\"13\">{}</text>\n",
            RIGHT - 118.0,
            y + 4.0,
            s.label
        ));
    }

    doc.push_str("</svg>\n");
    doc
}
