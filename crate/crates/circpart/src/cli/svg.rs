//! SVG rendering of partitions: polygon outline, filled indisks, stroked
//! outcircles, viewport normalized to the circumcircle.  Gap disks below a
//! radius threshold collapse into one summary marker per covering so deep
//! recursions stay tractable; the JSON document always carries full data.

use std::fmt::Write;

use crate::bounds::gamma_one;
use crate::construct::Partition;
use crate::geom::CoverPair;

/// Gap indisks smaller than this fraction of the inradius are summarized.
pub const THIN_RADIUS_FRACTION: f64 = 1e-4;

fn push_circle(out: &mut String, class: &str, pair: &CoverPair) {
    let indisk = pair.indisk;
    writeln!(
        out,
        r##"  <circle class="indisk {class}" cx="{}" cy="{}" r="{}" fill="#4878b0" fill-opacity="0.3" stroke="none"/>"##,
        indisk.center.x, -indisk.center.y, indisk.radius
    )
    .unwrap();
    let out_c = pair.outcircle;
    writeln!(
        out,
        r##"  <circle class="outcircle {class}" cx="{}" cy="{}" r="{}" fill="none" stroke="#b04848" stroke-width="{}"/>"##,
        out_c.center.x,
        -out_c.center.y,
        out_c.radius,
        0.002
    )
    .unwrap();
}

pub fn render(partition: &Partition) -> String {
    let circumradius = gamma_one(partition.k).expect("valid k").value;
    let margin = 0.05 * circumradius;
    let span = 2.0 * (circumradius + margin);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {span} {span}">"#,
        -(circumradius + margin),
        -(circumradius + margin)
    )
    .unwrap();

    let frame = crate::construct::KgonFrame::new(partition.k).expect("valid k");
    let points: Vec<String> = frame
        .vertices
        .iter()
        .map(|v| format!("{},{}", v.x, -v.y))
        .collect();
    writeln!(
        out,
        r##"  <polygon points="{}" fill="none" stroke="#222222" stroke-width="0.008"/>"##,
        points.join(" ")
    )
    .unwrap();

    push_circle(&mut out, "central", &partition.central);
    for corner in &partition.corners {
        push_circle(&mut out, "corner", corner);
    }
    let threshold = THIN_RADIUS_FRACTION * frame.inradius;
    for cover in &partition.gap_covers {
        let mut thinned = 0usize;
        let mut cx = 0.0;
        let mut cy = 0.0;
        for pair in &cover.pairs[2..] {
            if pair.indisk.radius < threshold {
                thinned += 1;
                cx += pair.indisk.center.x;
                cy += pair.indisk.center.y;
            } else {
                push_circle(&mut out, "gap", pair);
            }
        }
        if thinned > 0 {
            writeln!(
                out,
                r##"  <circle class="gap-summary" data-indisk-count="{thinned}" cx="{}" cy="{}" r="{threshold}" fill="#999999" fill-opacity="0.5" stroke="none"/>"##,
                cx / thinned as f64,
                -cy / thinned as f64
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}
