//! SVG figures of the level-k interval construction: one horizontal bar row
//! per (vertex, level), levels stacked top-down within each vertex group.
//! Output is deterministic for a fixed system and spec.

use crate::ifs_graph::{compute_hulls, GraphIfs};
use crate::interval_engine::{level_intervals, EngineError};
use crate::rational::to_f64;

pub const MAX_RENDER_LEVELS: u32 = 12;

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("{requested} levels exceed the render cap of {max}")]
    LevelTooDeep { requested: u32, max: u32 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Layout and styling. `levels` draws rows 0..=levels; level 0 is the hull.
#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub levels: u32,
    pub width: f64,
    pub row_height: f64,
    pub row_gap: f64,
    pub group_gap: f64,
    pub margin: f64,
    pub fill: String,
}

impl Default for RenderSpec {
    fn default() -> RenderSpec {
        RenderSpec {
            levels: 4,
            width: 800.0,
            row_height: 18.0,
            row_gap: 6.0,
            group_gap: 24.0,
            margin: 16.0,
            fill: "#1f77b4".into(),
        }
    }
}

fn coord(x: f64) -> String {
    format!("{x:.4}")
}

/// Renders the interval rows. Each vertex's hull spans the full drawable
/// width, so rows are scaled per vertex. Requires disjoint intervals (the
/// separation condition) for levels >= 1 to be meaningful; the interval
/// computation enforces it.
pub fn render_svg(ifs: &GraphIfs, spec: &RenderSpec) -> Result<String, RenderError> {
    if spec.levels > MAX_RENDER_LEVELS {
        return Err(RenderError::LevelTooDeep {
            requested: spec.levels,
            max: MAX_RENDER_LEVELS,
        });
    }
    let n = ifs.vertex_count();
    let rows = spec.levels as usize + 1;
    let group_height =
        rows as f64 * spec.row_height + (rows as f64 - 1.0) * spec.row_gap;
    let height = 2.0 * spec.margin
        + n as f64 * group_height
        + (n as f64 - 1.0) * spec.group_gap;
    let drawable = spec.width - 2.0 * spec.margin;

    let hulls = compute_hulls(ifs);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n",
        w = coord(spec.width),
        h = coord(height),
    ));
    for vertex in 0..n {
        let (lo, hi) = hulls.interval(vertex);
        let (lo, hi) = (to_f64(lo), to_f64(hi));
        let span = hi - lo;
        let group_top = spec.margin + vertex as f64 * (group_height + spec.group_gap);
        svg.push_str(&format!("<g data-vertex=\"{vertex}\">\n"));
        for level in 0..=spec.levels {
            let y = group_top + level as f64 * (spec.row_height + spec.row_gap);
            let mut row: Vec<(f64, f64)> = Vec::new();
            if level == 0 {
                row.push((lo, hi));
            } else {
                for interval in level_intervals(ifs, vertex, level)?.intervals {
                    row.push((to_f64(&interval.lo), to_f64(&interval.hi)));
                }
            }
            for (ilo, ihi) in row {
                let x = spec.margin + (ilo - lo) / span * drawable;
                let w = (ihi - ilo) / span * drawable;
                svg.push_str(&format!(
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                    coord(x),
                    coord(y),
                    coord(w),
                    coord(spec.row_height),
                    spec.fill,
                ));
            }
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs_graph::{CanonicalFamily, Edge, Similarity};
    use crate::rational::parse_rational;

    fn r(text: &str) -> crate::rational::Rational {
        parse_rational(text).unwrap()
    }

    fn family_c_ifs() -> GraphIfs {
        CanonicalFamily::new(r("1/4"), r("5/12"), r("1/3"), r("1/7"), r("11/21"), r("1/3"))
            .unwrap()
            .to_ifs()
    }

    #[test]
    fn renders_two_groups_of_five_rows() {
        let spec = RenderSpec { levels: 4, ..RenderSpec::default() };
        let svg = render_svg(&family_c_ifs(), &spec).unwrap();
        // Out-degree 2 everywhere: level k holds 2^k intervals, so each
        // vertex group draws 1 + 2 + 4 + 8 + 16 rectangles.
        assert_eq!(svg.matches("<g data-vertex").count(), 2);
        assert_eq!(svg.matches("<rect").count(), 2 * 31);
        // The level-1 left interval at the first vertex is [0, 1/4]:
        // x = margin, width = 768 / 4.
        assert!(svg.contains(
            "<rect x=\"16.0000\" y=\"40.0000\" width=\"192.0000\" height=\"18.0000\""
        ));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn level_zero_is_the_full_width_hull() {
        let spec = RenderSpec { levels: 0, ..RenderSpec::default() };
        let svg = render_svg(&family_c_ifs(), &spec).unwrap();
        assert_eq!(svg.matches("<rect").count(), 2);
        assert_eq!(
            svg.matches("x=\"16.0000\"").count(),
            2,
            "both hull bars start at the margin"
        );
        assert_eq!(svg.matches("width=\"768.0000\"").count(), 2);
    }

    #[test]
    fn output_is_deterministic() {
        let spec = RenderSpec::default();
        let first = render_svg(&family_c_ifs(), &spec).unwrap();
        let second = render_svg(&family_c_ifs(), &spec).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn guards_depth_and_separation() {
        let spec = RenderSpec { levels: 13, ..RenderSpec::default() };
        let err = render_svg(&family_c_ifs(), &spec).unwrap_err();
        assert!(matches!(err, RenderError::LevelTooDeep { requested: 13, max: 12 }));

        // Touching level-1 images violate the separation requirement.
        let touching = GraphIfs::new(
            1,
            vec![
                Edge { id: 1, from: 0, to: 0, map: Similarity::new(r("1/2"), r("0")) },
                Edge { id: 2, from: 0, to: 0, map: Similarity::new(r("1/2"), r("1/4")) },
            ],
        )
        .unwrap();
        let err = render_svg(&touching, &RenderSpec::default()).unwrap_err();
        assert!(matches!(err, RenderError::Engine(EngineError::CsscViolated { .. })));
    }
}
