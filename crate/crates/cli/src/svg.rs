//! Standalone SVG grouped bar chart for mean solve times.
//!
//! One group per system size, one bar per algorithm. Heights are log-scaled
//! with the baseline one decade below the smallest mean, so multi-decade
//! spreads between algorithms stay readable in one picture. The document is
//! self-contained: inline styling, labeled axes, a legend, no stylesheet.

use std::collections::BTreeMap;
use std::fmt::Write;

use symband::{Algorithm, Backend, MeanRow, StorageKind};

const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 58.0;
const PLOT_HEIGHT: f64 = 260.0;
const BAR_WIDTH: f64 = 26.0;
const BAR_GAP: f64 = 4.0;
const GROUP_GAP: f64 = 30.0;

fn color(algorithm: Algorithm) -> &'static str {
    match algorithm {
        Algorithm::Stdm => "#4477aa",
        Algorithm::Spdm => "#ee6677",
        Algorithm::Shdm => "#228833",
    }
}

/// The (storage, backend) pair with the most rows. Bars from different cost
/// models do not compare, so a mixed CSV charts only its dominant pair; ties
/// go to the smaller key for determinism.
fn dominant_pair(means: &[MeanRow]) -> Option<(StorageKind, Backend)> {
    let mut counts: BTreeMap<(StorageKind, Backend), usize> = BTreeMap::new();
    for row in means {
        *counts.entry((row.storage, row.backend)).or_default() += 1;
    }
    let mut best: Option<((StorageKind, Backend), usize)> = None;
    for (pair, count) in counts {
        if best.map_or(true, |(_, c)| count > c) {
            best = Some((pair, count));
        }
    }
    best.map(|(pair, _)| pair)
}

/// Renders the chart, or `None` when there is nothing to draw.
pub fn grouped_bar_chart(means: &[MeanRow]) -> Option<String> {
    let (storage, backend) = dominant_pair(means)?;
    let rows: Vec<&MeanRow> = means
        .iter()
        .filter(|r| r.storage == storage && r.backend == backend)
        .collect();

    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let algorithms: Vec<Algorithm> = Algorithm::ALL
        .into_iter()
        .filter(|a| rows.iter().any(|r| r.algorithm == *a))
        .collect();
    let mut cell: BTreeMap<(usize, Algorithm), f64> = BTreeMap::new();
    for r in &rows {
        cell.insert((r.n, r.algorithm), r.mean_seconds);
    }

    let t_min = rows
        .iter()
        .map(|r| r.mean_seconds)
        .fold(f64::INFINITY, f64::min);
    let t_max = rows.iter().map(|r| r.mean_seconds).fold(0.0, f64::max);
    let floor = t_min / 10.0;
    let span = (t_max / floor).ln();
    let bar_height = |t: f64| PLOT_HEIGHT * (t / floor).ln() / span;

    let group_width =
        algorithms.len() as f64 * BAR_WIDTH + (algorithms.len() - 1) as f64 * BAR_GAP;
    let plot_width = sizes.len() as f64 * (group_width + GROUP_GAP) + GROUP_GAP;
    let width = MARGIN_LEFT + plot_width + MARGIN_RIGHT;
    let height = MARGIN_TOP + PLOT_HEIGHT + MARGIN_BOTTOM;
    let base_y = MARGIN_TOP + PLOT_HEIGHT;
    let right = MARGIN_LEFT + plot_width;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"  <text x="{MARGIN_LEFT:.1}" y="22" font-size="14">mean solve time, {storage} storage, {backend} backend</text>"#
    );

    let _ = writeln!(
        out,
        r#"  <line x1="{MARGIN_LEFT:.1}" y1="{MARGIN_TOP:.1}" x2="{MARGIN_LEFT:.1}" y2="{base_y:.1}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"  <line x1="{MARGIN_LEFT:.1}" y1="{base_y:.1}" x2="{right:.1}" y2="{base_y:.1}" stroke="black"/>"#
    );

    // Ticks at every power of ten the bars span.
    let mut exp = floor.log10().ceil() as i32;
    loop {
        let tick = 10f64.powi(exp);
        if tick > t_max * 1.000001 {
            break;
        }
        let y = base_y - bar_height(tick);
        let x0 = MARGIN_LEFT - 5.0;
        let _ = writeln!(
            out,
            r#"  <line x1="{x0:.1}" y1="{y:.1}" x2="{MARGIN_LEFT:.1}" y2="{y:.1}" stroke="black"/>"#
        );
        let xt = MARGIN_LEFT - 8.0;
        let yt = y + 4.0;
        let _ = writeln!(
            out,
            r#"  <text x="{xt:.1}" y="{yt:.1}" text-anchor="end">1e{exp}</text>"#
        );
        exp += 1;
    }

    let x_label = MARGIN_LEFT + plot_width / 2.0;
    let y_bottom = height - 10.0;
    let _ = writeln!(
        out,
        r#"  <text x="{x_label:.1}" y="{y_bottom:.1}" text-anchor="middle">n</text>"#
    );
    let y_mid = MARGIN_TOP + PLOT_HEIGHT / 2.0;
    let _ = writeln!(
        out,
        r#"  <text x="18" y="{y_mid:.1}" text-anchor="middle" transform="rotate(-90 18 {y_mid:.1})">seconds (log scale)</text>"#
    );

    for (gi, &n) in sizes.iter().enumerate() {
        let group_x = MARGIN_LEFT + GROUP_GAP + gi as f64 * (group_width + GROUP_GAP);
        let cx = group_x + group_width / 2.0;
        let yl = base_y + 18.0;
        let _ = writeln!(
            out,
            r#"  <text x="{cx:.1}" y="{yl:.1}" text-anchor="middle">{n}</text>"#
        );
        for (bi, &algorithm) in algorithms.iter().enumerate() {
            let Some(&t) = cell.get(&(n, algorithm)) else {
                continue;
            };
            let h = bar_height(t).max(1.0);
            let x = group_x + bi as f64 * (BAR_WIDTH + BAR_GAP);
            let y = base_y - h;
            let _ = writeln!(
                out,
                r#"  <rect class="bar" x="{x:.1}" y="{y:.1}" width="{BAR_WIDTH:.0}" height="{h:.1}" fill="{fill}"><title>{algorithm} n={n}: {t:.3e} s</title></rect>"#,
                fill = color(algorithm)
            );
        }
    }

    let mut lx = width - MARGIN_RIGHT - algorithms.len() as f64 * 72.0;
    for &algorithm in &algorithms {
        let sx = lx;
        let tx = lx + 14.0;
        let _ = writeln!(
            out,
            r#"  <rect x="{sx:.1}" y="30" width="10" height="10" fill="{fill}"/>"#,
            fill = color(algorithm)
        );
        let _ = writeln!(
            out,
            r#"  <text x="{tx:.1}" y="39">{algorithm}</text>"#
        );
        lx += 72.0;
    }

    out.push_str("</svg>\n");
    Some(out)
}
