//! Static SVG diagrams of surface fans.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::fan::Fan2D;
use crate::lattice::LatticeVector;

/// Pixels per lattice unit.
const UNIT: i64 = 40;

/// Screen position of the ray through `v`, stretched or shrunk to the box of radius `limit`.
fn screen(v: &LatticeVector, limit: i64) -> (i64, i64) {
    let (x, y) = (&v.coords()[0], &v.coords()[1]);
    let m = x.abs().max(y.abs());
    let limit = BigInt::from(limit);
    let unit = BigInt::from(UNIT);
    let px = |c: &BigInt| {
        let p = if m <= limit {
            c * (&limit / &m) * &unit
        } else {
            c * &limit * &unit / &m
        };
        p.to_i64().expect("bounded by the view box")
    };
    (px(x), -px(y))
}

fn point(v: &LatticeVector, r: i64) -> (i64, i64) {
    let (x, y) = (&v.coords()[0], &v.coords()[1]);
    let m = x.abs().max(y.abs());
    if m < BigInt::from(r) {
        let unit = BigInt::from(UNIT);
        let c = |t: &BigInt| (t * &unit).to_i64().expect("small");
        (c(x), -c(y))
    } else {
        screen(v, r - 1)
    }
}

fn extent(fan: &Fan2D) -> i64 {
    fan.rays()
        .iter()
        .flat_map(|r| r.coords().iter())
        .map(|c| c.abs().to_i64().unwrap_or(i64::MAX / 4))
        .max()
        .unwrap_or(1)
        .clamp(2, 12)
        + 1
}

/// Deterministic SVG 1.1: integer grid dots, one arrow per ray (class
/// `ray`), and singular cones shaded (class `singular-cone`). Screen `y`
/// points down, so lattice `y` is negated.
pub fn render_svg(fan: &Fan2D) -> String {
    let r = extent(fan);
    let half = r * UNIT;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        -half,
        -half,
        2 * half,
        2 * half,
        2 * half,
        2 * half
    );
    let _ = writeln!(
        s,
        r##"<defs><marker id="head" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto"><path d="M0,0 L8,4 L0,8 z" fill="#000"/></marker></defs>"##
    );
    let _ = writeln!(
        s,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#fff"/>"##,
        -half,
        -half,
        2 * half,
        2 * half
    );
    for &i in fan.singular_cones() {
        let (pa, pb) = (screen(fan.ray(i), r - 1), screen(fan.ray(i + 1), r - 1));
        let _ = writeln!(
            s,
            r##"<polygon class="singular-cone" points="0,0 {},{} {},{}" fill="#f4b183" fill-opacity="0.5" stroke="none"/>"##,
            pa.0, pa.1, pb.0, pb.1
        );
    }
    for y in -r + 1..r {
        for x in -r + 1..r {
            let _ = writeln!(
                s,
                r##"<circle cx="{}" cy="{}" r="3" fill="#555"/>"##,
                x * UNIT,
                -y * UNIT
            );
        }
    }
    for ray in fan.rays() {
        let (x, y) = point(ray, r);
        let _ = writeln!(
            s,
            r##"<line class="ray" x1="0" y1="0" x2="{}" y2="{}" stroke="#000" stroke-width="2" marker-end="url(#head)"><title>{}</title></line>"##,
            x,
            y,
            ray.label()
        );
    }
    s.push_str("</svg>\n");
    s
}
