//! Shared helpers for unit tests. Oracles here are deliberately
//! independent of the implementation paths they check.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geodata::{PolygonPart, ZipId, ZipPolygon};

/// Star-shaped simple polygon around a center: sorted angles, random radii.
/// Non-self-intersecting by construction.
pub fn random_star_polygon(rng: &mut ChaCha8Rng, cx: f64, cy: f64, r: f64) -> ZipPolygon {
    let n = rng.random_range(5..14);
    let mut angles: Vec<f64> = (0..n)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    while angles.len() < 3 {
        angles.push(angles.last().unwrap() + 0.5);
    }
    let outer: Vec<(f64, f64)> = angles
        .iter()
        .map(|&a| {
            let rad = r * rng.random_range(0.35..1.0);
            (cx + rad * a.cos(), cy + rad * a.sin())
        })
        .collect();
    ZipPolygon::new(
        ZipId::new("00001").unwrap(),
        2008,
        vec![PolygonPart { outer, holes: vec![] }],
        "ea_m",
    )
    .unwrap()
}

/// Jittered-stratified Monte Carlo estimate of the fraction of a rectangle
/// covered by the polygon, using `grid`^2 sample points.
pub fn monte_carlo_coverage(
    poly: &ZipPolygon,
    (x0, y0, x1, y1): (f64, f64, f64, f64),
    grid: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let dx = (x1 - x0) / grid as f64;
    let dy = (y1 - y0) / grid as f64;
    let mut hits = 0u64;
    for i in 0..grid {
        for j in 0..grid {
            let x = x0 + (i as f64 + rng.random_range(0.0..1.0)) * dx;
            let y = y0 + (j as f64 + rng.random_range(0.0..1.0)) * dy;
            if poly.contains(x, y) {
                hits += 1;
            }
        }
    }
    hits as f64 / (grid * grid) as f64
}

/// Exact polygon ∩ rectangle area by per-edge trapezoid integration with
/// clamping (Green's theorem), an algorithm unrelated to the
/// Sutherland–Hodgman kernel under test.
pub fn rect_area_by_trapezoids(poly: &ZipPolygon, rect: (f64, f64, f64, f64)) -> f64 {
    let mut total = 0.0;
    for part in &poly.parts {
        total += ring_rect_area_trapezoid(&part.outer, rect).abs();
        for hole in &part.holes {
            total -= ring_rect_area_trapezoid(hole, rect).abs();
        }
    }
    total.max(0.0)
}

fn ring_rect_area_trapezoid(ring: &[(f64, f64)], (rx0, ry0, rx1, ry1): (f64, f64, f64, f64)) -> f64 {
    // Signed area of ring ∩ rect = ∮ clamped-y dx over edges clipped to the
    // x-slab, measuring y from the rect bottom and clamping to its height.
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (mut xa, ya) = ring[i];
        let (mut xb, yb) = ring[(i + 1) % n];
        let (mut ya, mut yb) = (ya, yb);
        if xa == xb {
            continue;
        }
        // Clip the segment to the x-slab [rx0, rx1].
        let t_for = |x: f64| (x - xa) / (xb - xa);
        let y_at = |t: f64| ya + t * (yb - ya);
        let (lo, hi) = if xa < xb { (xa, xb) } else { (xb, xa) };
        if hi <= rx0 || lo >= rx1 {
            continue;
        }
        if xa < xb {
            if xa < rx0 {
                let t = t_for(rx0);
                xa = rx0;
                ya = y_at(t);
            }
            if xb > rx1 {
                let t = t_for(rx1);
                xb = rx1;
                yb = y_at(t);
            }
        } else {
            if xa > rx1 {
                let t = t_for(rx1);
                xa = rx1;
                ya = y_at(t);
            }
            if xb < rx0 {
                let t = t_for(rx0);
                xb = rx0;
                yb = y_at(t);
            }
        }
        // Integrate the clamped height over [xa, xb]; split where the edge
        // crosses the clamp levels so each piece is linear.
        let clamp_h = |y: f64| (y - ry0).clamp(0.0, ry1 - ry0);
        let mut ts = vec![0.0, 1.0];
        if (ya - yb).abs() > 0.0 {
            for level in [ry0, ry1] {
                let t = (level - ya) / (yb - ya);
                if t > 0.0 && t < 1.0 {
                    ts.push(t);
                }
            }
        }
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let seg_y = |t: f64| ya + t * (yb - ya);
        let seg_x = |t: f64| xa + t * (xb - xa);
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let h0 = clamp_h(seg_y(t0));
            let h1 = clamp_h(seg_y(t1));
            acc += (seg_x(t1) - seg_x(t0)) * 0.5 * (h0 + h1);
        }
    }
    acc
}
