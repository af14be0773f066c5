//! Elementary rewrites of a corner equation, each with the map that carries
//! solutions of the rewritten equation back to solutions of the original.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::embed::MatrixEmbedding;
use crate::ring::{Elem, Ring, RingRef};
use crate::stablerank::{CornerEquation, CornerSolution, SkewCorner};
use crate::trace::lit;

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// `a -> a + bc`, `b -> b(p - cx)` for `c in pAq`.
    Shift { c: Elem },
    /// `a -> au`, `x -> u^-1 x` for a unit `u` of `qAq`.
    RightUnit { u: Elem, u_inv: Elem },
    /// `a -> va`, `x -> x v^-1`, `b -> v b v^-1` for a unit `v` of `pAp`.
    LeftUnit { v: Elem, v_inv: Elem },
    /// Moves a matrix-ring corner into the upper-left block of `M_size`.
    Enlarge { size: usize },
}

impl Step {
    pub fn name(&self) -> &'static str {
        match self {
            Step::Shift { .. } => "shift",
            Step::RightUnit { .. } => "right_unit",
            Step::LeftUnit { .. } => "left_unit",
            Step::Enlarge { .. } => "enlarge",
        }
    }

    pub fn to_json(&self) -> Vec<(&'static str, Value)> {
        match self {
            Step::Shift { c } => vec![("c", lit(c))],
            Step::RightUnit { u, u_inv } => vec![("u", lit(u)), ("u_inverse", lit(u_inv))],
            Step::LeftUnit { v, v_inv } => vec![("v", lit(v)), ("v_inverse", lit(v_inv))],
            Step::Enlarge { size } => vec![("size", json!(size))],
        }
    }

    /// Rewrites `eq` (on `corner`) and returns the back map.
    pub fn apply(&self, corner: &SkewCorner, eq: &CornerEquation) -> Result<Applied> {
        let r = corner.ring();
        let (p, q) = (corner.p(), corner.q());
        match self {
            Step::Shift { c } => {
                if !corner.contains(c) {
                    return Err(Error::InvalidWitness(format!("shift {} not in pAq", r.show(c))));
                }
                let a = r.add(&eq.a, &r.mul(&eq.b, c));
                let b = r.mul(&eq.b, &r.sub(p, &r.mul(c, &eq.x)));
                Ok(Applied {
                    corner: corner.clone(),
                    eq: CornerEquation::new(a, eq.x.clone(), b),
                    back: BackMap::Shift {
                        ring: r.clone(),
                        c: c.clone(),
                        x: eq.x.clone(),
                    },
                })
            }
            Step::RightUnit { u, u_inv } => {
                check_unit(r, u, u_inv, q)?;
                Ok(Applied {
                    corner: corner.clone(),
                    eq: CornerEquation::new(r.mul(&eq.a, u), r.mul(u_inv, &eq.x), eq.b.clone()),
                    back: BackMap::RightUnit {
                        ring: r.clone(),
                        u: u.clone(),
                        u_inv: u_inv.clone(),
                    },
                })
            }
            Step::LeftUnit { v, v_inv } => {
                check_unit(r, v, v_inv, p)?;
                Ok(Applied {
                    corner: corner.clone(),
                    eq: CornerEquation::new(
                        r.mul(v, &eq.a),
                        r.mul(&eq.x, v_inv),
                        r.mul_all(&[v, &eq.b, v_inv]),
                    ),
                    back: BackMap::LeftUnit {
                        ring: r.clone(),
                        v: v.clone(),
                        v_inv: v_inv.clone(),
                    },
                })
            }
            Step::Enlarge { size } => {
                let emb = MatrixEmbedding::new(r, *size)?;
                let big = SkewCorner::new(emb.target(), emb.embed(p), emb.embed(q))?;
                let eq2 = CornerEquation::new(emb.embed(&eq.a), emb.embed(&eq.x), emb.embed(&eq.b));
                Ok(Applied {
                    corner: big,
                    eq: eq2,
                    back: BackMap::Enlarge { embedding: emb },
                })
            }
        }
    }
}

/// `u u_inv = u_inv u = e` with both in `eAe`.
pub(crate) fn check_unit(r: &Ring, u: &Elem, u_inv: &Elem, e: &Elem) -> Result<()> {
    let inside = |w: &Elem| r.contains(w) && &r.mul_all(&[e, w, e]) == w;
    if !inside(u) || !inside(u_inv) || &r.mul(u, u_inv) != e || &r.mul(u_inv, u) != e {
        return Err(Error::InvalidWitness(format!(
            "{} is not a unit of the corner with inverse {}",
            r.show(u),
            r.show(u_inv)
        )));
    }
    Ok(())
}

/// Result of [`Step::apply`].
#[derive(Debug, Clone)]
pub struct Applied {
    pub corner: SkewCorner,
    pub eq: CornerEquation,
    pub back: BackMap,
}

#[derive(Debug, Clone)]
pub enum BackMap {
    Shift { ring: RingRef, c: Elem, x: Elem },
    RightUnit { ring: RingRef, u: Elem, u_inv: Elem },
    LeftUnit { ring: RingRef, v: Elem, v_inv: Elem },
    Enlarge { embedding: MatrixEmbedding },
}

impl BackMap {
    pub fn apply(&self, sol: &CornerSolution) -> Result<CornerSolution> {
        Ok(match self {
            BackMap::Shift { ring, c, x } => {
                // y = c + y' - c x y'
                let cxy = ring.mul_all(&[c, x, &sol.y]);
                CornerSolution::new(ring.sub(&ring.add(c, &sol.y), &cxy), sol.z.clone())
            }
            BackMap::RightUnit { ring, u, u_inv } => {
                CornerSolution::new(ring.mul(&sol.y, u_inv), ring.mul(u, &sol.z))
            }
            BackMap::LeftUnit { ring, v, v_inv } => {
                CornerSolution::new(ring.mul(v_inv, &sol.y), ring.mul(&sol.z, v))
            }
            BackMap::Enlarge { embedding } => {
                CornerSolution::new(embedding.restrict(&sol.y)?, embedding.restrict(&sol.z)?)
            }
        })
    }
}

/// A stack of applied steps; solutions are carried back in reverse order.
#[derive(Debug, Clone)]
pub struct StepStack {
    corner: SkewCorner,
    eq: CornerEquation,
    backs: Vec<BackMap>,
}

impl StepStack {
    pub fn new(corner: &SkewCorner, eq: &CornerEquation) -> Self {
        StepStack {
            corner: corner.clone(),
            eq: eq.clone(),
            backs: Vec::new(),
        }
    }

    pub fn corner(&self) -> &SkewCorner {
        &self.corner
    }

    pub fn eq(&self) -> &CornerEquation {
        &self.eq
    }

    pub fn len(&self) -> usize {
        self.backs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.backs.is_empty()
    }

    pub fn push(&mut self, step: &Step) -> Result<()> {
        let applied = step.apply(&self.corner, &self.eq)?;
        self.corner = applied.corner;
        self.eq = applied.eq;
        self.backs.push(applied.back);
        Ok(())
    }

    /// Carries a solution of the current equation back to the original one.
    pub fn unwind(&self, sol: CornerSolution) -> Result<CornerSolution> {
        self.backs.iter().rev().try_fold(sol, |s, b| b.apply(&s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::embed::matrix_unit;
    use crate::stablerank::{skew_sr1_check, verify_solution, Solver};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(r: &Ring, i: usize, j: usize) -> Elem {
        matrix_unit(r, i, j, &Elem::Res(1))
    }

    fn equations(c: &SkewCorner) -> Vec<CornerEquation> {
        let r = c.ring();
        let mut out = Vec::new();
        for a in c.elements().unwrap() {
            for x in c.opposite_elements().unwrap() {
                let b = r.sub(c.p(), &r.mul(&a, &x));
                out.push(CornerEquation::new(a.clone(), x, b));
            }
        }
        out
    }

    #[test]
    fn identity_steps_are_identities() {
        let r = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let c = SkewCorner::new(&r, unit(&r, 0, 0), r.one()).unwrap();
        for eq in equations(&c) {
            let s = Step::Shift { c: r.zero() }.apply(&c, &eq).unwrap();
            assert_eq!(s.eq, eq);
            let u = Step::RightUnit {
                u: r.one(),
                u_inv: r.one(),
            }
            .apply(&c, &eq)
            .unwrap();
            assert_eq!(u.eq, eq);
            let sol = CornerSolution::new(r.zero(), r.zero());
            assert_eq!(s.back.apply(&sol).unwrap(), sol);
            assert_eq!(u.back.apply(&sol).unwrap(), sol);
        }
    }

    #[test]
    fn non_units_are_rejected() {
        let r = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let c = SkewCorner::new(&r, r.one(), r.one()).unwrap();
        let eq = CornerEquation::new(r.one(), r.one(), r.zero());
        let e11 = unit(&r, 0, 0);
        let bad = Step::RightUnit {
            u: e11.clone(),
            u_inv: e11,
        };
        assert!(matches!(bad.apply(&c, &eq), Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn random_step_stacks_back_propagate() {
        let r = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let units: Vec<Elem> = r
            .enumerate(1 << 16)
            .unwrap()
            .elements()
            .iter()
            .filter(|u| r.enumerate(1 << 16).unwrap().elements().iter().any(|v| r.mul(u, v) == r.one()))
            .cloned()
            .collect();
        let inverse = |u: &Elem| {
            units
                .iter()
                .find(|v| r.mul(u, v) == r.one())
                .unwrap()
                .clone()
        };
        for (p, q) in [(r.one(), r.one()), (unit(&r, 0, 0), r.one()), (unit(&r, 0, 0), unit(&r, 1, 1))] {
            let c = SkewCorner::new(&r, p.clone(), q.clone()).unwrap();
            let carrier = c.elements().unwrap();
            let solver = skew_sr1_check(&c).unwrap().solver().unwrap().clone();
            for eq in equations(&c) {
                let mut stack = StepStack::new(&c, &eq);
                for _ in 0..4 {
                    let step = match rng.gen_range(0..3) {
                        0 => Step::Shift {
                            c: carrier[rng.gen_range(0..carrier.len())].clone(),
                        },
                        1 if q == r.one() => {
                            let u = units[rng.gen_range(0..units.len())].clone();
                            Step::RightUnit {
                                u_inv: inverse(&u),
                                u,
                            }
                        }
                        2 if p == r.one() => {
                            let v = units[rng.gen_range(0..units.len())].clone();
                            Step::LeftUnit {
                                v_inv: inverse(&v),
                                v,
                            }
                        }
                        _ => Step::Shift { c: r.zero() },
                    };
                    stack.push(&step).unwrap();
                    stack.eq().validate(stack.corner()).unwrap();
                }
                let sol = solver.solve(stack.eq()).unwrap();
                let back = stack.unwind(sol).unwrap();
                assert!(verify_solution(&c, &eq, &back));
            }
        }
    }

    #[test]
    fn enlarge_round_trip() {
        let r = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let c = SkewCorner::new(&r, unit(&r, 0, 0), r.one()).unwrap();
        for eq in equations(&c) {
            let applied = Step::Enlarge { size: 3 }.apply(&c, &eq).unwrap();
            applied.eq.validate(&applied.corner).unwrap();
            let big = skew_sr1_check(&applied.corner).unwrap();
            let sol = big.solver().unwrap().solve(&applied.eq).unwrap();
            assert!(verify_solution(&c, &eq, &applied.back.apply(&sol).unwrap()));
        }
    }
}
