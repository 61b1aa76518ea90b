//! Self-similar Riemann solutions of the cubic law `u_t + (u^3)_x = 0`.

use crate::models::CubicModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock {
        left: f64,
        right: f64,
        speed: f64,
    },
    /// Centred rarefaction; both end states share one sign.
    Rarefaction {
        left: f64,
        right: f64,
    },
}

impl Wave {
    pub fn left(&self) -> f64 {
        match *self {
            Wave::Shock { left, .. } | Wave::Rarefaction { left, .. } => left,
        }
    }

    pub fn right(&self) -> f64 {
        match *self {
            Wave::Shock { right, .. } | Wave::Rarefaction { right, .. } => right,
        }
    }

    /// Slowest and fastest characteristic speed spanned by the wave.
    pub fn speed_range(&self) -> (f64, f64) {
        match *self {
            Wave::Shock { speed, .. } => (speed, speed),
            Wave::Rarefaction { left, right } => (3.0 * left * left, 3.0 * right * right),
        }
    }
}

/// Ordered wave fan between `left` and `right`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannSolution {
    pub left: f64,
    pub right: f64,
    pub waves: Vec<Wave>,
}

impl RiemannSolution {
    /// Value at `xi = x / t`.
    pub fn sample(&self, xi: f64) -> f64 {
        let mut state = self.left;
        for w in &self.waves {
            let (lo, hi) = w.speed_range();
            if xi < lo {
                return state;
            }
            if xi < hi {
                if let Wave::Rarefaction { left, right } = *w {
                    let sign = if left + right >= 0.0 { 1.0 } else { -1.0 };
                    return sign * (xi / 3.0).sqrt();
                }
            }
            state = w.right();
        }
        state
    }

    pub fn sample_many(&self, xi: &[f64]) -> Vec<f64> {
        xi.iter().map(|&x| self.sample(x)).collect()
    }

    /// Sample on grid nodes at time `t` for data initially jumping at `x0`.
    pub fn sample_at(&self, x: &[f64], x0: f64, t: f64) -> Vec<f64> {
        x.iter().map(|&xi| self.sample((xi - x0) / t)).collect()
    }

    fn negated(&self) -> Self {
        RiemannSolution {
            left: -self.left,
            right: -self.right,
            waves: self
                .waves
                .iter()
                .map(|w| match *w {
                    Wave::Shock { left, right, speed } => Wave::Shock {
                        left: -left,
                        right: -right,
                        speed,
                    },
                    Wave::Rarefaction { left, right } => Wave::Rarefaction {
                        left: -left,
                        right: -right,
                    },
                })
                .collect(),
        }
    }
}

fn chord(a: f64, b: f64) -> f64 {
    CubicModel { delta: 0.0 }.chord_speed(a, b)
}

fn shock(left: f64, right: f64) -> Wave {
    Wave::Shock {
        left,
        right,
        speed: chord(left, right),
    }
}

/// Classical entropy solution built from the concave envelope of `u^3` on
/// `[u_r, u_l]` when `u_l > u_r` (convex envelope on `[u_l, u_r]` otherwise).
pub fn classical_riemann_cubic(u_l: f64, u_r: f64) -> RiemannSolution {
    if u_l < u_r {
        return classical_riemann_cubic(-u_l, -u_r).negated();
    }
    let waves = if u_l == u_r {
        Vec::new()
    } else if u_l <= 0.0 {
        vec![Wave::Rarefaction {
            left: u_l,
            right: u_r,
        }]
    } else if u_r >= -0.5 * u_l {
        vec![shock(u_l, u_r)]
    } else {
        // the envelope leaves the graph tangentially at -u_l/2
        let m = -0.5 * u_l;
        vec![
            Wave::Shock {
                left: u_l,
                right: m,
                speed: 0.75 * u_l * u_l,
            },
            Wave::Rarefaction {
                left: m,
                right: u_r,
            },
        ]
    };
    RiemannSolution {
        left: u_l,
        right: u_r,
        waves,
    }
}

/// Solution selecting the middle state `phi(u_l)` for the nonclassical shock
/// leaving `u_l`. `phi` is evaluated for positive arguments only; values at
/// or above `-u_l/2` reproduce the classical solution.
pub fn nonclassical_riemann_cubic(u_l: f64, u_r: f64, phi: impl Fn(f64) -> f64) -> RiemannSolution {
    if u_l < 0.0 {
        return nonclassical_riemann_cubic(-u_l, -u_r, phi).negated();
    }
    let mut waves = Vec::new();
    if u_r >= u_l {
        if u_r > u_l {
            waves.push(Wave::Rarefaction {
                left: u_l,
                right: u_r,
            });
        }
    } else {
        let flat = if u_l > 0.0 {
            phi(u_l).max(-u_l).min(-0.5 * u_l)
        } else {
            0.0
        };
        let companion = -u_l - flat;
        if u_r >= companion {
            waves.push(shock(u_l, u_r));
        } else {
            if flat != u_l {
                let speed = if flat == -0.5 * u_l {
                    0.75 * u_l * u_l
                } else {
                    chord(u_l, flat)
                };
                waves.push(Wave::Shock {
                    left: u_l,
                    right: flat,
                    speed,
                });
            }
            if u_r > flat {
                waves.push(shock(flat, u_r));
            } else if u_r < flat {
                waves.push(Wave::Rarefaction {
                    left: flat,
                    right: u_r,
                });
            }
        }
    }
    RiemannSolution {
        left: u_l,
        right: u_r,
        waves,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(u: f64) -> f64 {
        u * u * u
    }

    fn assert_admissible_classical(sol: &RiemannSolution) {
        let mut prev = f64::NEG_INFINITY;
        let mut state = sol.left;
        for w in &sol.waves {
            assert_eq!(w.left(), state);
            state = w.right();
            let (lo, hi) = w.speed_range();
            assert!(lo >= prev - 1e-12 && hi >= lo, "{sol:?}");
            prev = hi;
            if let Wave::Shock { left, right, speed } = *w {
                // Rankine-Hugoniot
                assert!(
                    (speed * (right - left) - (f(right) - f(left))).abs()
                        < 1e-10 * (1.0 + f(left).abs())
                );
                // Oleinik chord condition
                for k in 1..200 {
                    let u = left + (right - left) * k as f64 / 200.0;
                    let from_left = (f(u) - f(left)) / (u - left);
                    let to_right = (f(right) - f(u)) / (right - u);
                    assert!(
                        from_left >= speed - 1e-9 && to_right <= speed + 1e-9,
                        "{w:?} at {u}"
                    );
                }
            }
        }
        assert_eq!(state, sol.right);
    }

    #[test]
    fn convex_shock_example() {
        let s = classical_riemann_cubic(4.0, 2.0);
        assert_eq!(
            s.waves,
            vec![Wave::Shock {
                left: 4.0,
                right: 2.0,
                speed: 28.0
            }]
        );
        assert_eq!(s.sample(27.9), 4.0);
        assert_eq!(s.sample(28.1), 2.0);
    }

    #[test]
    fn constant_data() {
        let s = classical_riemann_cubic(1.5, 1.5);
        assert!(s.waves.is_empty());
        assert_eq!(s.sample(-3.0), 1.5);
        assert_eq!(s.sample(100.0), 1.5);
    }

    #[test]
    fn composite_has_no_interior_plateau() {
        let s = classical_riemann_cubic(4.0, -2.0);
        assert_eq!(s.waves.len(), 1);
        assert_eq!(s.waves[0].speed_range().0, 12.0);
        let s = classical_riemann_cubic(4.0, -3.0);
        assert_eq!(s.waves.len(), 2);
        assert_eq!(s.waves[0].right(), -2.0);
        assert_eq!(s.waves[0].speed_range().0, 12.0);
        assert_eq!(s.waves[1].speed_range(), (12.0, 27.0));
    }

    #[test]
    fn classical_cases_are_admissible() {
        let vals = [-5.0, -3.0, -2.0, -1.0, -0.3, 0.0, 0.4, 1.0, 2.0, 4.0];
        for &a in &vals {
            for &b in &vals {
                let s = classical_riemann_cubic(a, b);
                assert_admissible_classical(&s);
                let n = classical_riemann_cubic(-a, -b);
                for xi in [-1.0, 0.5, 2.0, 7.0, 13.0, 30.0, 80.0] {
                    assert_eq!(n.sample(xi), -s.sample(xi));
                }
            }
        }
    }

    #[test]
    fn rarefaction_profile() {
        let s = classical_riemann_cubic(-1.0, -2.0);
        assert_eq!(s.sample(3.0), -1.0);
        assert!((s.sample(6.75) + 1.5).abs() < 1e-15);
        assert_eq!(s.sample(12.0), -2.0);
    }

    #[test]
    fn nonclassical_structures() {
        let k = 2f64.sqrt() / 3.0;
        let phi = |u: f64| -u + k;
        let s = nonclassical_riemann_cubic(4.0, -2.0, phi);
        assert_eq!(s.waves.len(), 2);
        assert!(matches!(s.waves[1], Wave::Shock { .. }));
        assert!((s.waves[0].right() - (-4.0 + k)).abs() < 1e-15);
        let s = nonclassical_riemann_cubic(2.0, -2.0, phi);
        assert!(matches!(s.waves[1], Wave::Rarefaction { .. }));
        // plateau visible between the waves
        let (_, hi) = s.waves[0].speed_range();
        let (lo, _) = s.waves[1].speed_range();
        assert!(lo > hi);
        assert_eq!(s.sample(0.5 * (lo + hi)), -2.0 + k);
    }

    #[test]
    fn classical_choice_reproduces_envelope() {
        let vals = [-5.0, -2.5, -1.0, 0.0, 0.7, 3.0];
        for &a in &vals {
            for &b in &vals {
                let c = classical_riemann_cubic(a, b);
                let n = nonclassical_riemann_cubic(a, b, |u| -0.5 * u);
                for xi in [-1.0, 0.1, 1.0, 3.0, 6.0, 10.0, 20.0, 40.0, 80.0] {
                    assert!((c.sample(xi) - n.sample(xi)).abs() < 1e-14, "{a} {b} {xi}");
                }
            }
        }
    }
}
