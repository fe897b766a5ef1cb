//! Exact two-variable feasibility for constraints `p·s + q·c ≥ r`.
//!
//! With `p, q ≥ 0` the feasible set in the `(s, c)` box is upward closed, so
//! its lower-left boundary is the graph of the convex nonincreasing function
//! `g(s) = max(c_floor, maxᵢ (rᵢ − pᵢ·s)/qᵢ)`. The breakpoints of `g` are the
//! only candidate vertices; they are found with an upper envelope of lines in
//! `O(m log m)` rather than by testing all pairwise intersections.

use serde::{Deserialize, Serialize};

/// Constraint `p·s + q·c ≥ r` with `p, q ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub s_min: f64,
    pub s_max: f64,
    pub c_min: f64,
    pub c_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "objective", rename_all = "snake_case")]
pub enum Objective {
    /// Smallest `s`, then smallest `c` at that `s`.
    LexMinSThenC,
    /// Smallest `c` with `s` fixed.
    MinCGivenS { s: f64 },
}

/// Line `c = intercept + slope·s`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Line {
    slope: f64,
    intercept: f64,
}

impl Line {
    #[inline]
    fn at(&self, s: f64) -> f64 {
        self.intercept + self.slope * s
    }
}

/// Lower boundary of the feasible region over `[s_floor, s_max]`.
#[derive(Debug, Clone)]
pub struct Frontier {
    /// Envelope lines ordered by increasing slope (active left to right).
    hull: Vec<Line>,
    /// `hull[k]` is active on `[breaks[k-1], breaks[k]]`.
    breaks: Vec<f64>,
    pub s_floor: f64,
    pub bounds: Bounds,
    /// Set when some constraint cannot be met anywhere in the box.
    pub blocked: bool,
}

impl Frontier {
    pub fn new(constraints: &[HalfPlane], bounds: Bounds) -> Frontier {
        let mut s_floor = bounds.s_min;
        let mut c_floor = bounds.c_min;
        let mut blocked = false;
        let mut lines = Vec::new();
        for h in constraints {
            if h.r <= 0.0 {
                continue;
            }
            match (h.p > 0.0, h.q > 0.0) {
                (false, false) => blocked = true,
                (true, false) => s_floor = s_floor.max(h.r / h.p),
                (false, true) => c_floor = c_floor.max(h.r / h.q),
                (true, true) => lines.push(Line {
                    slope: -h.p / h.q,
                    intercept: h.r / h.q,
                }),
            }
        }
        lines.push(Line {
            slope: 0.0,
            intercept: c_floor,
        });
        lines.sort_by(|a, b| a.slope.total_cmp(&b.slope).then(b.intercept.total_cmp(&a.intercept)));
        lines.dedup_by(|b, a| a.slope == b.slope);

        // Upper envelope for increasing s: standard monotone hull.
        let mut hull: Vec<Line> = Vec::with_capacity(lines.len());
        for l in lines {
            while hull.len() >= 2 {
                let l1 = hull[hull.len() - 2];
                let l2 = hull[hull.len() - 1];
                // l2 is useless if l1 and l intersect at or left of where l1 and l2 do.
                let lhs = (l.intercept - l1.intercept) * (l1.slope - l2.slope);
                let rhs = (l2.intercept - l1.intercept) * (l1.slope - l.slope);
                if lhs <= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(l);
        }
        let breaks = hull
            .windows(2)
            .map(|w| (w[1].intercept - w[0].intercept) / (w[0].slope - w[1].slope))
            .collect();
        Frontier {
            hull,
            breaks,
            s_floor,
            bounds,
            blocked: blocked || s_floor > bounds.s_max,
        }
    }

    /// Minimal feasible `c` at `s` (ignoring the `c_max` cap).
    pub fn min_c(&self, s: f64) -> f64 {
        self.hull.iter().map(|l| l.at(s)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Frontier vertices `(s, g(s))` inside `[s_floor, s_max]`, including the
    /// endpoints and the crossing with `c = c_max`.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        if self.blocked {
            return Vec::new();
        }
        let (lo, hi) = (self.s_floor, self.bounds.s_max);
        let mut out = vec![(lo, self.min_c(lo))];
        for &b in &self.breaks {
            if b > lo && b < hi {
                out.push((b, self.min_c(b)));
            }
        }
        out.push((hi, self.min_c(hi)));
        if let Some(s) = self.crossing(self.bounds.c_max) {
            out.push((s, self.min_c(s).min(self.bounds.c_max)));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Smallest `s` in `[s_floor, s_max]` with `g(s) ≤ level`.
    fn crossing(&self, level: f64) -> Option<f64> {
        let (lo, hi) = (self.s_floor, self.bounds.s_max);
        if self.hull.iter().any(|l| l.slope == 0.0 && l.intercept > level) {
            return None;
        }
        // g(s) ≤ level iff every line is ≤ level at s.
        let s = self
            .hull
            .iter()
            .filter(|l| l.slope < 0.0)
            .map(|l| (level - l.intercept) / l.slope)
            .fold(lo, f64::max);
        (s <= hi).then_some(s)
    }

    pub fn solve(&self, objective: Objective) -> Option<(f64, f64)> {
        if self.blocked {
            return None;
        }
        let c_max = self.bounds.c_max;
        match objective {
            Objective::LexMinSThenC => {
                let s = self.crossing(c_max)?;
                let c = self.min_c(s);
                Some((s, c.min(c_max)))
            }
            Objective::MinCGivenS { s } => {
                if s < self.s_floor || s > self.bounds.s_max {
                    return None;
                }
                let c = self.min_c(s);
                (c <= c_max).then_some((s, c))
            }
        }
    }
}

pub fn solve(constraints: &[HalfPlane], bounds: Bounds, objective: Objective) -> Option<(f64, f64)> {
    Frontier::new(constraints, bounds).solve(objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const BOX: Bounds = Bounds {
        s_min: 1.0,
        s_max: 50.0,
        c_min: 0.0,
        c_max: 40.0,
    };

    /// Brute force: every pairwise intersection of constraint and box lines,
    /// filtered for feasibility, minimized under the objective.
    fn brute_force(cs: &[HalfPlane], b: Bounds, obj: Objective) -> Option<(f64, f64)> {
        // Lines as a·s + b·c = r.
        let mut lines: Vec<(f64, f64, f64)> = cs.iter().map(|h| (h.p, h.q, h.r)).collect();
        lines.push((1.0, 0.0, b.s_min));
        lines.push((1.0, 0.0, b.s_max));
        lines.push((0.0, 1.0, b.c_min));
        lines.push((0.0, 1.0, b.c_max));
        if let Objective::MinCGivenS { s } = obj {
            lines.push((1.0, 0.0, s));
        }
        let feasible = |s: f64, c: f64| {
            let tol = 1e-9;
            s >= b.s_min - tol
                && s <= b.s_max + tol
                && c >= b.c_min - tol
                && c <= b.c_max + tol
                && cs.iter().all(|h| h.p * s + h.q * c >= h.r - tol * (1.0 + h.r.abs()))
        };
        let mut best: Option<(f64, f64)> = None;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, r1) = lines[i];
                let (a2, b2, r2) = lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.abs() < 1e-14 {
                    continue;
                }
                let s = (r1 * b2 - r2 * b1) / det;
                let c = (a1 * r2 - a2 * r1) / det;
                if !feasible(s, c) {
                    continue;
                }
                if let Objective::MinCGivenS { s: s0 } = obj {
                    if (s - s0).abs() > 1e-9 {
                        continue;
                    }
                }
                let better = match best {
                    None => true,
                    Some((bs, bc)) => match obj {
                        Objective::LexMinSThenC => s < bs - 1e-12 || ((s - bs).abs() <= 1e-12 && c < bc),
                        Objective::MinCGivenS { .. } => c < bc,
                    },
                };
                if better {
                    best = Some((s, c));
                }
            }
        }
        best
    }

    fn close(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> bool {
        match (a, b) {
            (None, None) => true,
            (Some((s1, c1)), Some((s2, c2))) => {
                (s1 - s2).abs() <= 1e-7 * (1.0 + s2.abs()) && (c1 - c2).abs() <= 1e-7 * (1.0 + c2.abs())
            }
            _ => false,
        }
    }

    #[test]
    fn no_constraints_gives_the_corner() {
        assert_eq!(solve(&[], BOX, Objective::LexMinSThenC), Some((1.0, 0.0)));
    }

    #[test]
    fn single_binding_constraint() {
        // 2s + c ≥ 10 → lex: s = max(1, (10 − 40)/2) = 1, c = 8.
        let cs = [HalfPlane { p: 2.0, q: 1.0, r: 10.0 }];
        assert_eq!(solve(&cs, BOX, Objective::LexMinSThenC), Some((1.0, 8.0)));
        assert_eq!(solve(&cs, BOX, Objective::MinCGivenS { s: 4.0 }), Some((4.0, 2.0)));
        assert_eq!(solve(&cs, BOX, Objective::MinCGivenS { s: 6.0 }), Some((6.0, 0.0)));
    }

    #[test]
    fn c_cap_forces_larger_s() {
        // s + c ≥ 100 with c ≤ 40 → s = 60 > 50: infeasible; relax s_max.
        let cs = [HalfPlane { p: 1.0, q: 1.0, r: 100.0 }];
        assert_eq!(solve(&cs, BOX, Objective::LexMinSThenC), None);
        let wide = Bounds { s_max: 100.0, ..BOX };
        assert_eq!(solve(&cs, wide, Objective::LexMinSThenC), Some((60.0, 40.0)));
    }

    #[test]
    fn degenerate_constraints() {
        let only_s = [HalfPlane { p: 2.0, q: 0.0, r: 6.0 }];
        assert_eq!(solve(&only_s, BOX, Objective::LexMinSThenC), Some((3.0, 0.0)));
        let only_c = [HalfPlane { p: 0.0, q: 2.0, r: 6.0 }];
        assert_eq!(solve(&only_c, BOX, Objective::LexMinSThenC), Some((1.0, 3.0)));
        let impossible = [HalfPlane { p: 0.0, q: 0.0, r: 1.0 }];
        assert_eq!(solve(&impossible, BOX, Objective::LexMinSThenC), None);
    }

    #[test]
    fn vertices_lie_on_frontier() {
        let cs = [
            HalfPlane { p: 1.0, q: 1.0, r: 20.0 },
            HalfPlane { p: 4.0, q: 1.0, r: 44.0 },
            HalfPlane { p: 1.0, q: 4.0, r: 32.0 },
        ];
        let f = Frontier::new(&cs, BOX);
        let v = f.vertices();
        assert!(v.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 >= w[1].1 - 1e-12));
        // Hull breakpoints at s = 8 (lines 1, 2) and s = 16 (lines 1, 3).
        assert!(v.iter().any(|&(s, c)| (s - 8.0).abs() < 1e-12 && (c - 12.0).abs() < 1e-12));
        assert!(v.iter().any(|&(s, c)| (s - 16.0).abs() < 1e-12 && (c - 4.0).abs() < 1e-12));
    }

    fn arb_constraints() -> impl Strategy<Value = Vec<HalfPlane>> {
        prop::collection::vec(
            (0.0f64..5.0, 0.0f64..5.0, -5.0f64..60.0).prop_map(|(p, q, r)| HalfPlane { p, q, r }),
            0..12,
        )
    }

    proptest! {
        #[test]
        fn lex_matches_brute_force(cs in arb_constraints()) {
            let fast = solve(&cs, BOX, Objective::LexMinSThenC);
            let slow = brute_force(&cs, BOX, Objective::LexMinSThenC);
            prop_assert!(close(fast, slow), "fast {:?} slow {:?}", fast, slow);
        }

        #[test]
        fn min_c_matches_brute_force(cs in arb_constraints(), s in 1.0f64..50.0) {
            let obj = Objective::MinCGivenS { s };
            let fast = solve(&cs, BOX, obj);
            let slow = brute_force(&cs, BOX, obj);
            prop_assert!(close(fast, slow), "fast {:?} slow {:?}", fast, slow);
        }

        #[test]
        fn solution_is_feasible(cs in arb_constraints()) {
            if let Some((s, c)) = solve(&cs, BOX, Objective::LexMinSThenC) {
                for h in &cs {
                    prop_assert!(h.p * s + h.q * c >= h.r - 1e-9 * (1.0 + h.r.abs()));
                }
            }
        }
    }
}
