//! Seeded Fruchterman–Reingold layout for embedded node-link diagrams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::layout::Rect;

pub const ITERATIONS: usize = 300;
pub const DEFAULT_SEED: u64 = 42;

/// Positions for `n` nodes linked by `links` (index pairs), inside `rect`
/// shrunk by `inset` on every side. Identical inputs give bit-identical
/// output.
pub fn layout_nodelink(n: usize, links: &[(usize, usize)], rect: Rect, inset: f64, seed: u64) -> Vec<(f64, f64)> {
    let area = rect.inset(inset);
    let center = area.center();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![center];
    }
    // simulate in a unit square, then fit
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let k = (1.0 / n as f64).sqrt();
    let t0 = 0.1;
    let mut disp = vec![(0.0f64, 0.0f64); n];
    for it in 0..ITERATIONS {
        disp.iter_mut().for_each(|d| *d = (0.0, 0.0));
        for i in 0..n {
            for j in (i + 1)..n {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let d = (dx * dx + dy * dy).sqrt().max(1e-9);
                let f = k * k / d;
                let (fx, fy) = (dx / d * f, dy / d * f);
                disp[i].0 += fx;
                disp[i].1 += fy;
                disp[j].0 -= fx;
                disp[j].1 -= fy;
            }
        }
        for &(a, b) in links {
            if a == b {
                continue;
            }
            let (dx, dy) = (pos[a].0 - pos[b].0, pos[a].1 - pos[b].1);
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            let f = d * d / k;
            let (fx, fy) = (dx / d * f, dy / d * f);
            disp[a].0 -= fx;
            disp[a].1 -= fy;
            disp[b].0 += fx;
            disp[b].1 += fy;
        }
        let t = t0 * (1.0 - it as f64 / ITERATIONS as f64);
        for i in 0..n {
            let (dx, dy) = disp[i];
            let len = (dx * dx + dy * dy).sqrt();
            if len > 0.0 {
                let step = len.min(t);
                pos[i].0 += dx / len * step;
                pos[i].1 += dy / len * step;
            }
        }
    }
    fit(&pos, area)
}

/// Centers the bounding box of `pos` on `area` and scales it uniformly to
/// fit inside.
fn fit(pos: &[(f64, f64)], area: Rect) -> Vec<(f64, f64)> {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pos {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let (bw, bh) = (x1 - x0, y1 - y0);
    let sx = if bw > 0.0 { area.w / bw } else { f64::INFINITY };
    let sy = if bh > 0.0 { area.h / bh } else { f64::INFINITY };
    let s = sx.min(sy);
    let s = if s.is_finite() { s } else { 0.0 };
    let (mx, my) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let (cx, cy) = area.center();
    pos.iter()
        .map(|&(x, y)| {
            let px = (cx + (x - mx) * s).clamp(area.x, area.right());
            let py = (cy + (y - my) * s).clamp(area.y, area.bottom());
            (px, py)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_at_center() {
        let r = Rect::new(10.0, 20.0, 100.0, 50.0);
        assert_eq!(layout_nodelink(1, &[], r, 5.0, 42), vec![(60.0, 45.0)]);
    }

    #[test]
    fn pair_is_symmetric_about_center() {
        let r = Rect::new(0.0, 0.0, 100.0, 100.0);
        let p = layout_nodelink(2, &[(0, 1)], r, 4.0, 42);
        assert!(((p[0].0 + p[1].0) / 2.0 - 50.0).abs() < 1e-6);
        assert!(((p[0].1 + p[1].1) / 2.0 - 50.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic_and_inside() {
        let r = Rect::new(5.0, 5.0, 200.0, 120.0);
        let links = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0)];
        let a = layout_nodelink(6, &links, r, 6.0, 7);
        let b = layout_nodelink(6, &links, r, 6.0, 7);
        assert_eq!(a, b);
        let inner = r.inset(6.0);
        assert!(a.iter().all(|&(x, y)| inner.contains_point(x, y, 1e-9)));
        assert_ne!(a, layout_nodelink(6, &links, r, 6.0, 8));
    }
}
