//! Scatter plot of (log N, log tau) with Tamagawa-quality contour lines,
//! written as a self-contained SVG.

use super::{CurveRecord, PipelineError, SourceTag};
use std::path::Path;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 640.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 60.0;

/// Contour levels: the conjectural ceiling (7/3) ln 3 plus round values.
pub fn contour_levels() -> Vec<f64> {
    vec![
        1.5,
        1.8,
        2.0,
        2.2,
        2.4,
        7.0 / 3.0 * 3f64.ln(),
    ]
}

fn style(source: SourceTag) -> (&'static str, bool) {
    // (color, filled); derived curves are drawn as open black circles
    match source {
        SourceTag::Cremona | SourceTag::Lmfdb => ("green", true),
        SourceTag::HighMerit => ("gold", true),
        SourceTag::MediumQuality => ("red", true),
        SourceTag::HighQuality => ("blue", true),
        SourceTag::Unbeaten => ("gray", true),
        SourceTag::Derived => ("black", false),
    }
}

pub fn emit_figure(records: &[CurveRecord], path: &Path) -> Result<(), PipelineError> {
    let pts: Vec<(f64, f64, SourceTag)> = records
        .iter()
        .map(|r| {
            let n: f64 = super::super::real::to_f64(&super::super::real::ln_uint(&r.conductor));
            let t: f64 = super::super::real::to_f64(&super::super::real::ln_uint(&r.tamagawa));
            (n, t, r.source)
        })
        .collect();
    let x_max = pts.iter().map(|p| p.0).fold(12.0f64, f64::max) * 1.05;
    let y_max = pts.iter().map(|p| p.1).fold(8.0f64, f64::max) * 1.1;
    let x_min = 3.0f64.min(pts.iter().map(|p| p.0).fold(3.0, f64::min));
    let to_px = |x: f64, y: f64| {
        let px = MARGIN_L + (x - x_min) / (x_max - x_min) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = HEIGHT - MARGIN_B - y / y_max * (HEIGHT - MARGIN_T - MARGIN_B);
        (px, py)
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // contour curves y = q x / ln x
    for q in contour_levels() {
        let mut d = String::new();
        let steps = 200;
        for i in 0..=steps {
            let x = x_min.max(1.5) + (x_max - x_min.max(1.5)) * i as f64 / steps as f64;
            let y = q * x / x.ln();
            if y < 0.0 || y > y_max {
                continue;
            }
            let (px, py) = to_px(x, y);
            if d.is_empty() {
                d.push_str(&format!("M {px:.1} {py:.1}"));
            } else {
                d.push_str(&format!(" L {px:.1} {py:.1}"));
            }
        }
        svg.push_str(&format!(
            "<path d=\"{d}\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n"
        ));
        // label at the right end
        let xl = x_max * 0.98;
        let yl = q * xl / xl.ln();
        if yl <= y_max {
            let (px, py) = to_px(xl, yl);
            svg.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" fill=\"#666\">{q:.3}</text>\n",
                px - 30.0,
                py - 4.0
            ));
        }
    }

    // axes
    let (ox, oy) = to_px(x_min, 0.0);
    let (xe, _) = to_px(x_max, 0.0);
    let (_, ye) = to_px(x_min, y_max);
    svg.push_str(&format!(
        "<line x1=\"{ox:.1}\" y1=\"{oy:.1}\" x2=\"{xe:.1}\" y2=\"{oy:.1}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{ox:.1}\" y1=\"{oy:.1}\" x2=\"{ox:.1}\" y2=\"{ye:.1}\" stroke=\"black\"/>\n"
    ));
    // ticks every 5 units
    let mut t = (x_min / 5.0).ceil() * 5.0;
    while t <= x_max {
        let (px, py) = to_px(t, 0.0);
        svg.push_str(&format!(
            "<line x1=\"{px:.1}\" y1=\"{py:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{t:.0}</text>\n",
            py + 5.0, px - 6.0, py + 18.0
        ));
        t += 5.0;
    }
    let mut t = 5.0;
    while t <= y_max {
        let (px, py) = to_px(x_min, t);
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{px:.1}\" y2=\"{py:.1}\" stroke=\"black\"/>\n<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{t:.0}</text>\n",
            px - 5.0, px - 28.0, py + 4.0
        ));
        t += 5.0;
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\">log N</text>\n",
        (WIDTH - MARGIN_L) / 2.0,
        HEIGHT - 15.0
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.1}\" font-size=\"14\" transform=\"rotate(-90 18 {:.1})\">log tau</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    ));

    // dots; filled sources first so the open derived circles stay visible
    let mut ordered: Vec<&(f64, f64, SourceTag)> = pts.iter().collect();
    ordered.sort_by_key(|p| matches!(p.2, SourceTag::Derived));
    for (x, y, source) in ordered {
        let (px, py) = to_px(*x, *y);
        let (color, filled) = style(*source);
        if filled {
            svg.push_str(&format!(
                "<circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"3\" fill=\"{color}\"/>\n"
            ));
        } else {
            svg.push_str(&format!(
                "<circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"4.5\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
            ));
        }
    }

    // legend
    let legend = [
        (SourceTag::Cremona, "database curves"),
        (SourceTag::HighMerit, "high merit triples"),
        (SourceTag::MediumQuality, "medium quality triples"),
        (SourceTag::HighQuality, "high quality triples"),
        (SourceTag::Unbeaten, "unbeaten triples"),
        (SourceTag::Derived, "triples from triples"),
    ];
    let lx = MARGIN_L + 12.0;
    let mut ly = MARGIN_T + 12.0;
    svg.push_str(&format!(
        "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"190\" height=\"{}\" fill=\"white\" stroke=\"#ccc\"/>\n",
        lx - 8.0,
        ly - 10.0,
        legend.len() * 18 + 8
    ));
    for (tag, label) in legend {
        let (color, filled) = style(tag);
        if filled {
            svg.push_str(&format!(
                "<circle cx=\"{lx:.1}\" cy=\"{ly:.1}\" r=\"3\" fill=\"{color}\"/>\n"
            ));
        } else {
            svg.push_str(&format!(
                "<circle cx=\"{lx:.1}\" cy=\"{ly:.1}\" r=\"4.5\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{label}</text>\n",
            lx + 10.0,
            ly + 4.0
        ));
        ly += 18.0;
    }
    svg.push_str("</svg>\n");

    std::fs::write(path, svg).map_err(|e| PipelineError::Io(path.display().to_string(), e))
}
