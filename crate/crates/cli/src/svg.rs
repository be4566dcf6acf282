//! Deterministic SVG heatmap rendering for frequency maps.
//!
//! Cells are laid out with detection wavelength on x and excitation
//! wavelength on y (ascending upward), linearly colored through a fixed
//! 256-entry gradient, with axis ticks, a color bar and a title. Identical
//! input yields byte-identical output.

use std::fmt::Write as _;

use twodes::fourier::FrequencyMap;

/// Gradient anchor colors, dark-to-bright.
const STOPS: [(u8, u8, u8); 5] = [
    (68, 1, 84),
    (59, 82, 139),
    (33, 145, 140),
    (94, 201, 98),
    (253, 231, 37),
];

/// The full 256-entry gradient as hex strings.
pub fn gradient() -> Vec<String> {
    (0..256)
        .map(|i| {
            let x = i as f64 / 255.0 * (STOPS.len() - 1) as f64;
            let k = (x.floor() as usize).min(STOPS.len() - 2);
            let f = x - k as f64;
            let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * f).round() as u8;
            let (r, g, b) = (
                mix(STOPS[k].0, STOPS[k + 1].0),
                mix(STOPS[k].1, STOPS[k + 1].1),
                mix(STOPS[k].2, STOPS[k + 1].2),
            );
            format!("#{r:02x}{g:02x}{b:02x}")
        })
        .collect()
}

/// Gradient index (0..=255) of a linearly scaled amplitude.
pub fn color_index(v: f64, min: f64, max: f64) -> usize {
    if max <= min {
        return 0;
    }
    (((v - min) / (max - min) * 255.0).round() as i64).clamp(0, 255) as usize
}

const PLOT: f64 = 480.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 50.0;
const BAR_GAP: f64 = 24.0;
const BAR_W: f64 = 18.0;
const RIGHT: f64 = 90.0;
const BOTTOM: f64 = 60.0;

/// Render a frequency map to standalone SVG text.
pub fn render_heatmap(map: &FrequencyMap, title: &str) -> String {
    let lut = gradient();
    let ne = map.exc_axis.len();
    let nd = map.det_axis.len();
    let min = map.amp.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = map.amp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cell_w = PLOT / nd as f64;
    let cell_h = PLOT / ne as f64;
    let width = LEFT + PLOT + BAR_GAP + BAR_W + RIGHT;
    let height = TOP + PLOT + BOTTOM;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(
        s,
        "  <style>text {{ font-family: monospace; font-size: 12px; fill: #222; }}</style>"
    );
    let _ = writeln!(
        s,
        "  <rect x=\"0\" y=\"0\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>"
    );
    let _ = writeln!(s, "  <text x=\"{LEFT:.0}\" y=\"24\">{}</text>", xml_escape(title));

    // cells, row-major: excitation rows (ascending upward), detection cols
    for ei in 0..ne {
        let y = TOP + PLOT - (ei + 1) as f64 * cell_h;
        for di in 0..nd {
            let x = LEFT + di as f64 * cell_w;
            let idx = color_index(map.amp[[ei, di]], min, max);
            let _ = writeln!(
                s,
                "  <rect class=\"cell\" x=\"{x:.3}\" y=\"{y:.3}\" width=\"{cell_w:.3}\" \
                 height=\"{cell_h:.3}\" fill=\"{}\"/>",
                lut[idx]
            );
        }
    }

    // frame and ticks
    let _ = writeln!(
        s,
        "  <rect x=\"{LEFT:.3}\" y=\"{TOP:.3}\" width=\"{PLOT:.3}\" height=\"{PLOT:.3}\" \
         fill=\"none\" stroke=\"#222\"/>"
    );
    for (i, &nm) in tick_indices(nd).iter().map(|&i| (i, &map.det_axis[i])) {
        let x = LEFT + (i as f64 + 0.5) * cell_w;
        let _ = writeln!(
            s,
            "  <line x1=\"{x:.3}\" y1=\"{:.3}\" x2=\"{x:.3}\" y2=\"{:.3}\" stroke=\"#222\"/>",
            TOP + PLOT,
            TOP + PLOT + 5.0
        );
        let _ = writeln!(
            s,
            "  <text x=\"{x:.3}\" y=\"{:.3}\" text-anchor=\"middle\">{nm:.1}</text>",
            TOP + PLOT + 20.0
        );
    }
    let _ = writeln!(
        s,
        "  <text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\">detection / nm</text>",
        LEFT + PLOT / 2.0,
        TOP + PLOT + 42.0
    );
    for (i, &nm) in tick_indices(ne).iter().map(|&i| (i, &map.exc_axis[i])) {
        let y = TOP + PLOT - (i as f64 + 0.5) * cell_h;
        let _ = writeln!(
            s,
            "  <line x1=\"{:.3}\" y1=\"{y:.3}\" x2=\"{LEFT:.3}\" y2=\"{y:.3}\" stroke=\"#222\"/>",
            LEFT - 5.0
        );
        let _ = writeln!(
            s,
            "  <text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\">{nm:.1}</text>",
            LEFT - 9.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        "  <text x=\"14\" y=\"{:.3}\" transform=\"rotate(-90 14 {:.3})\" \
         text-anchor=\"middle\">excitation / nm</text>",
        TOP + PLOT / 2.0,
        TOP + PLOT / 2.0
    );

    // color bar, bottom-to-top gradient in 64 bands
    let bar_x = LEFT + PLOT + BAR_GAP;
    let bands = 64usize;
    let band_h = PLOT / bands as f64;
    for b in 0..bands {
        let idx = (b as f64 / (bands - 1) as f64 * 255.0).round() as usize;
        let y = TOP + PLOT - (b + 1) as f64 * band_h;
        let _ = writeln!(
            s,
            "  <rect x=\"{bar_x:.3}\" y=\"{y:.3}\" width=\"{BAR_W:.3}\" height=\"{:.3}\" \
             fill=\"{}\"/>",
            band_h + 0.5,
            lut[idx]
        );
    }
    let _ = writeln!(
        s,
        "  <rect x=\"{bar_x:.3}\" y=\"{TOP:.3}\" width=\"{BAR_W:.3}\" height=\"{PLOT:.3}\" \
         fill=\"none\" stroke=\"#222\"/>"
    );
    let _ = writeln!(
        s,
        "  <text x=\"{:.3}\" y=\"{:.3}\">{max:.4e}</text>",
        bar_x + BAR_W + 6.0,
        TOP + 10.0
    );
    let _ = writeln!(
        s,
        "  <text x=\"{:.3}\" y=\"{:.3}\">{min:.4e}</text>",
        bar_x + BAR_W + 6.0,
        TOP + PLOT
    );
    let _ = writeln!(s, "</svg>");
    s
}

/// Up to six roughly even tick positions.
fn tick_indices(n: usize) -> Vec<usize> {
    if n <= 6 {
        return (0..n).collect();
    }
    let step = (n - 1) as f64 / 5.0;
    let mut out: Vec<usize> = (0..6).map(|k| (k as f64 * step).round() as usize).collect();
    out.dedup();
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn map_2x2() -> FrequencyMap {
        let mut amp = Array2::zeros((2, 2));
        amp[[0, 1]] = 3.5;
        amp[[1, 0]] = 1.0;
        FrequencyMap {
            nu0_cm: 340.0,
            band_cm: 17.7,
            amp,
            exc_axis: vec![664.0, 665.0],
            det_axis: vec![680.0, 681.0],
        }
    }

    #[test]
    fn one_hot_cell_gets_the_top_color() {
        let svg = render_heatmap(&map_2x2(), "map");
        let top = &gradient()[255];
        let hot = svg
            .lines()
            .filter(|l| l.contains("class=\"cell\"") && l.contains(top.as_str()))
            .count();
        assert_eq!(hot, 1);
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = render_heatmap(&map_2x2(), "map at 340 cm-1");
        let b = render_heatmap(&map_2x2(), "map at 340 cm-1");
        assert_eq!(a, b);
    }

    #[test]
    fn color_index_is_monotone() {
        let mut last = 0;
        for k in 0..=20 {
            let idx = color_index(k as f64, 0.0, 20.0);
            assert!(idx >= last);
            last = idx;
        }
        assert_eq!(color_index(0.0, 0.0, 20.0), 0);
        assert_eq!(color_index(20.0, 0.0, 20.0), 255);
        assert_eq!(color_index(5.0, 5.0, 5.0), 0);
    }
}
