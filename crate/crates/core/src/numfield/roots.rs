//! Certified isolation of the complex roots of a squarefree rational polynomial.

use rug::{Float, Integer};

use crate::ball::{CBall, Interval};
use crate::error::{Error, Result};
use crate::exact::QPoly;

/// A disc certified to contain exactly one root.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub ball: CBall,
    /// The root is real; the ball then has an exactly real centre.
    pub real: bool,
}

/// Isolates all roots of a squarefree polynomial of degree ≥ 1.
///
/// Roots are approximated by Aberth iteration, polished by Newton steps at
/// the working precision, and certified with Smith's inclusion theorem: with
/// Weierstrass corrections `W_i = p(z_i) / (lc · ∏_{j≠i} (z_i − z_j))`, every
/// connected component of `⋃ D(z_i, n|W_i|)` holds as many roots as discs.
/// Pairwise disjoint discs therefore hold exactly one root each. A disc with
/// a real centre holding one root of a real polynomial holds a real root.
///
/// The result is sorted by `(re, im)` of the midpoints.
pub fn isolate_roots(p: &QPoly, prec: u32) -> Result<Vec<IsolatedRoot>> {
    let n = p.degree().ok_or_else(|| Error::InvalidPolynomial("zero polynomial".into()))?;
    if n == 0 {
        return Err(Error::InvalidPolynomial("constant polynomial has no roots".into()));
    }
    let coeffs = p.primitive_integer();
    if n == 1 {
        let root = rug::Rational::from((-coeffs[0].clone(), coeffs[1].clone()));
        return Ok(vec![IsolatedRoot { ball: CBall::from_rational(prec, &root), real: true }]);
    }

    let mut approx = aberth(&coeffs, 128.max(prec.min(256)))?;
    let mut wp = prec.max(64);
    for _attempt in 0..6 {
        approx = newton_polish(&coeffs, &approx, wp + 32);
        if let Some(roots) = certify(&coeffs, &approx, wp) {
            let mut roots = roots;
            roots.sort_by(|a, b| {
                a.ball
                    .re()
                    .partial_cmp(b.ball.re())
                    .unwrap()
                    .then(a.ball.im().partial_cmp(b.ball.im()).unwrap())
            });
            return Ok(roots.into_iter().map(|r| IsolatedRoot { ball: r.ball.set_prec(prec), real: r.real }).collect());
        }
        wp *= 2;
    }
    Err(Error::PrecisionExhausted(format!("could not separate the roots of {p}")))
}

fn coeff_balls(coeffs: &[Integer], prec: u32) -> Vec<CBall> {
    coeffs.iter().map(|c| CBall::from_real(&Interval::from_integer(prec, c))).collect()
}

fn horner(cs: &[CBall], z: &CBall) -> CBall {
    let mut acc = cs.last().unwrap().clone();
    for c in cs.iter().rev().skip(1) {
        acc = acc.mul(z).add(c);
    }
    acc
}

fn derivative(coeffs: &[Integer]) -> Vec<Integer> {
    coeffs.iter().enumerate().skip(1).map(|(i, c)| Integer::from(c * i as u32)).collect()
}

/// Simultaneous Aberth–Ehrlich iteration on midpoints only.
fn aberth(coeffs: &[Integer], prec: u32) -> Result<Vec<CBall>> {
    let n = coeffs.len() - 1;
    let cs = coeff_balls(coeffs, prec);
    let ds = coeff_balls(&derivative(coeffs), prec);
    // Cauchy bound on root moduli.
    let lead = Float::with_val(prec, Integer::from(coeffs[n].abs_ref()));
    let mut bound = Float::with_val(prec, 0);
    for c in &coeffs[..n] {
        let r = Float::with_val(prec, Integer::from(c.abs_ref())) / &lead;
        if r > bound {
            bound = r;
        }
    }
    bound += 1;
    let mut z: Vec<CBall> = (0..n)
        .map(|k| {
            let angle = Float::with_val(prec, std::f64::consts::TAU * k as f64 / n as f64 + 0.4);
            let radius = Float::with_val(prec, &bound * 0.5) + 0.1;
            CBall::point(
                Float::with_val(prec, angle.cos_ref()) * &radius,
                Float::with_val(prec, angle.sin_ref()) * &radius,
            )
        })
        .collect();

    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 16));
    for _ in 0..2000 {
        let mut worst = Float::with_val(64, 0);
        for i in 0..n {
            let pz = horner(&cs, &z[i]).mid();
            let dz = horner(&ds, &z[i]).mid();
            let Ok(newton) = pz.div(&dz) else { continue };
            let newton = newton.mid();
            let mut s = CBall::zero(prec);
            for j in 0..n {
                if j != i {
                    if let Ok(t) = z[i].sub(&z[j]).mid().inv() {
                        s = s.add(&t.mid()).mid();
                    }
                }
            }
            let denom = CBall::one(prec).sub(&newton.mul(&s).mid()).mid();
            let step = match newton.div(&denom) {
                Ok(w) => w.mid(),
                Err(_) => newton,
            };
            z[i] = z[i].sub(&step).mid();
            let rel = Float::with_val(64, step.abs_upper() / (Float::with_val(64, z[i].abs_upper()) + 1u32));
            if rel > worst {
                worst = rel;
            }
        }
        if worst < tol {
            return Ok(z);
        }
    }
    Ok(z)
}

fn newton_polish(coeffs: &[Integer], approx: &[CBall], prec: u32) -> Vec<CBall> {
    let cs = coeff_balls(coeffs, prec);
    let ds = coeff_balls(&derivative(coeffs), prec);
    approx
        .iter()
        .map(|z0| {
            let mut z = z0.set_prec(prec).mid();
            let mut bits = 64u32;
            loop {
                let pz = horner(&cs, &z).mid();
                let dz = horner(&ds, &z).mid();
                if let Ok(step) = pz.div(&dz) {
                    z = z.sub(&step.mid()).mid();
                }
                if bits >= 2 * prec {
                    break;
                }
                bits *= 2;
            }
            z
        })
        .collect()
}

struct Certified {
    ball: CBall,
    real: bool,
}

fn certify(coeffs: &[Integer], approx: &[CBall], prec: u32) -> Option<Vec<Certified>> {
    let n = approx.len();
    let cs = coeff_balls(coeffs, prec + 32);
    let lc = cs[n].clone();

    // Snap near-real approximations onto the axis and pair conjugates exactly.
    let snap = Float::with_val(64, Float::i_exp(1, -(prec as i32) / 2));
    let mut centres: Vec<(CBall, bool)> = Vec::with_capacity(n);
    let mut upper: Vec<CBall> = Vec::new();
    for z in approx {
        let scale = Float::with_val(64, z.abs_upper()) + 1u32;
        let im_abs = Float::with_val(64, z.im().abs_ref());
        if im_abs < Float::with_val(64, &snap * &scale) {
            centres.push((CBall::point(z.re().clone(), Float::with_val(z.prec(), 0)), true));
        } else if *z.im() > 0 {
            upper.push(z.clone());
        }
    }
    for z in upper {
        centres.push((z.conj(), false));
        centres.push((z, false));
    }
    if centres.len() != n {
        return None;
    }

    let nf = Float::with_val(64, n as u32);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let zi = &centres[i].0;
        let mut den = lc.clone();
        for (j, (zj, _)) in centres.iter().enumerate() {
            if j != i {
                den = den.mul(&zi.sub(zj));
            }
        }
        let w = horner(&cs, zi).div(&den).ok()?;
        let radius = Float::with_val_round(64, w.abs_upper() * &nf, rug::float::Round::Up).0;
        out.push(Certified { ball: CBall::with_rad(zi.re().clone(), zi.im().clone(), radius), real: centres[i].1 });
    }
    for i in 0..n {
        for j in i + 1..n {
            if !out[i].ball.disjoint(&out[j].ball) {
                return None;
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let roots = isolate_roots(&QPoly::from_ints(&[-2, 0, 1]), 128).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.real));
        let s = Interval::from_int(128, 2).sqrt();
        assert!(roots[1].ball.overlaps(&CBall::from_real(&s)));
        assert!(roots[0].ball.overlaps(&CBall::from_real(&s.neg())));
        assert!(roots[1].ball.rad() < &Float::with_val(64, 1e-30));
    }

    #[test]
    fn cube_root_of_two() {
        let roots = isolate_roots(&QPoly::from_ints(&[-2, 0, 0, 1]), 128).unwrap();
        assert_eq!(roots.iter().filter(|r| r.real).count(), 1);
        let real = roots.iter().find(|r| r.real).unwrap();
        assert!((real.ball.re().to_f64() - 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
        let complex: Vec<_> = roots.iter().filter(|r| !r.real).collect();
        assert_eq!(complex[0].ball.re(), complex[1].ball.re());
        assert!(complex[0].ball.im() < complex[1].ball.im());
    }

    #[test]
    fn cyclotomic_eight() {
        let roots = isolate_roots(&QPoly::from_ints(&[1, 0, 0, 0, 1]), 200).unwrap();
        assert_eq!(roots.len(), 4);
        for r in &roots {
            let m = r.ball.abs();
            assert!(m.contains(&Float::with_val(200, 1)));
        }
    }
}
