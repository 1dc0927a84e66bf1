//! Euler and Rogers dilogarithms, and the Rogers lift on ideal tetrahedra.

use crate::scissors::ITetrahedron;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// `π²/6`.
pub const ZETA2: f64 = PI * PI / 6.0;
/// Default tolerance of [`ModPiSqHalf`] comparisons.
pub const MOD_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum DilogError {
    #[error("{0} lies on the branch cut (1, ∞); pass a side")]
    OnBranchCut(f64),
    #[error("{0} lies outside the domain of the Rogers dilogarithm")]
    Domain(Complex64),
    #[error("modulus is 0, 1 or not finite")]
    DegenerateModuli,
}

/// Side from which a point on a branch cut is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// `B_{2k} / (2k+1)!` for the series in `-log(1-z)`.
const BERNOULLI_COEFFS: [f64; 10] = [
    1.0 / 36.0,
    -1.0 / 3600.0,
    1.0 / 211_680.0,
    -1.0 / 10_886_400.0,
    1.0 / 526_901_760.0,
    -4.064_761_645_144_226e-11,
    8.921_691_020_456_453e-13,
    -1.993_929_586_072_107_9e-14,
    4.518_980_029_619_918e-16,
    -1.035_651_761_218_124_6e-17,
];

/// Principal branch on `|z| ≤ 1`, `Re z ≤ 1/2`.
fn li2_core(z: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    // Li2 = u - u²/4 + Σ B_{2k} u^{2k+1} / (2k+1)!
    let mut term = u * u2;
    let mut sum = u - u2 / 4.0;
    for c in BERNOULLI_COEFFS {
        sum += term * c;
        term *= u2;
    }
    sum
}

/// Principal branch; only defined off the cut `(1, ∞)`.
pub fn li2(z: Complex64) -> Result<Complex64, DilogError> {
    if z.im == 0.0 && z.re > 1.0 {
        return Err(DilogError::OnBranchCut(z.re));
    }
    Ok(li2_principal(z))
}

/// Limit of `li2` at `z` from the given side; agrees with [`li2`] off the cut.
pub fn li2_side(z: Complex64, side: Side) -> Complex64 {
    if z.im == 0.0 && z.re > 1.0 {
        let x = z.re;
        let re = PI * PI / 3.0 - 0.5 * x.ln().powi(2) - li2_principal(Complex64::new(1.0 / x, 0.0)).re;
        let im = PI * x.ln();
        return Complex64::new(re, if side == Side::Above { im } else { -im });
    }
    li2_principal(z)
}

fn li2_principal(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z == one {
        return Complex64::new(ZETA2, 0.0);
    }
    if z.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.norm() > 1.0 {
        // inversion, valid off the cut
        let w = one / z;
        let mut log_neg = (-z).ln();
        if z.im == 0.0 && z.re < -1.0 {
            log_neg = Complex64::new(log_neg.re, 0.0);
        }
        return -li2_unit(w) - ZETA2 - 0.5 * log_neg * log_neg;
    }
    li2_unit(z)
}

fn li2_unit(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z.re > 0.5 {
        let w = one - z;
        if w.norm() == 0.0 {
            return Complex64::new(ZETA2, 0.0);
        }
        return -li2_core(w) + ZETA2 - z.ln() * w.ln();
    }
    li2_core(z)
}

/// Normalization of the Rogers dilogarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `L(1) = π²/6`.
    Standard,
    /// `L(1) = 0`.
    Shifted,
}

/// `Li2(x) + ½ log x log(1 − x)`, minus `π²/6` when shifted.
///
/// Defined on `C ∖ ((−∞,0) ∪ (1,∞))`, with the limits at 0 and 1.
pub fn rogers_l(x: Complex64, norm: Normalization) -> Result<Complex64, DilogError> {
    if x.im == 0.0 && (x.re < 0.0 || x.re > 1.0) || !x.is_finite() {
        return Err(DilogError::Domain(x));
    }
    let one = Complex64::new(1.0, 0.0);
    let standard = if x.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else if x == one {
        Complex64::new(ZETA2, 0.0)
    } else {
        li2_principal(x) + 0.5 * x.ln() * (one - x).ln()
    };
    Ok(match norm {
        Normalization::Standard => standard,
        Normalization::Shifted => standard - ZETA2,
    })
}

/// A complex number modulo `period · Z` on the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModPeriod {
    pub value: Complex64,
    pub period: f64,
}

impl ModPeriod {
    /// Representative with real part in `[0, period)`.
    pub fn reduced(&self) -> Complex64 {
        Complex64::new(self.value.re.rem_euclid(self.period), self.value.im)
    }

    /// Distance to the nearest representative of `o`.
    pub fn distance(&self, o: &ModPeriod) -> f64 {
        let d = self.value - o.value;
        let r = d.re / self.period;
        ((r - r.round()) * self.period).hypot(d.im)
    }

    pub fn approx_eq(&self, o: &ModPeriod, tol: f64) -> bool {
        self.distance(o) <= tol
    }

    pub fn add(&self, o: &ModPeriod) -> ModPeriod {
        ModPeriod { value: self.value + o.value, period: self.period }
    }

    /// The same value in a coarser quotient.
    pub fn with_period(&self, period: f64) -> ModPeriod {
        ModPeriod { value: self.value, period }
    }
}

/// Values of the Rogers lift, taken modulo `π²/2`.
pub type ModPiSqHalf = ModPeriod;

pub fn mod_pi_sq_half(value: Complex64) -> ModPiSqHalf {
    ModPeriod { value, period: PI * PI / 2.0 }
}

/// Rogers lift of an ideal tetrahedron, flattened by its charge.
///
/// The log-parameters `log w_j ∓ iπ c_j` sum to zero, which fixes the
/// flattening `(p, q) = ∓(c0, c1)` of [`rogers_lift_flattened`].
pub fn rogers_lift(x: &ITetrahedron) -> Result<ModPiSqHalf, DilogError> {
    let star = x.sign as i64;
    rogers_lift_flattened(x.sign, x.w[0], -star * x.charge[0], -star * x.charge[1])
}

/// `±(L(w0) + (iπ/2)(q log w0 + p log(1 − w0)))` with shifted `L`.
///
/// The log-parameters are `log w0 + pπi` and `−log(1 − w0) + qπi`.
pub fn rogers_lift_flattened(sign: i8, w0: Complex64, p: i64, q: i64) -> Result<ModPiSqHalf, DilogError> {
    let one = Complex64::new(1.0, 0.0);
    if !w0.is_finite() || w0.norm() < 1e-300 || (w0 - one).norm() < 1e-300 {
        return Err(DilogError::DegenerateModuli);
    }
    let main = li2_side(w0, Side::Below) + 0.5 * w0.ln() * (one - w0).ln() - ZETA2;
    let flat = Complex64::new(0.0, PI / 2.0) * (q as f64 * w0.ln() + p as f64 * (one - w0).ln());
    Ok(mod_pi_sq_half(sign as f64 * (main + flat)))
}

/// Sum of [`rogers_lift`] over a chain of ideal tetrahedra.
pub fn rogers_lift_of_class(tets: &[ITetrahedron]) -> Result<ModPiSqHalf, DilogError> {
    tets.iter().try_fold(mod_pi_sq_half(Complex64::new(0.0, 0.0)), |acc, x| Ok(acc.add(&rogers_lift(x)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{self, Perm4};
    use crate::scissors::ideal_transit;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Plain power series, for `|z| ≤ 1/2`.
    fn series(z: Complex64, terms: usize) -> Complex64 {
        let mut p = z;
        let mut s = c(0.0, 0.0);
        for n in 1..=terms {
            s += p / (n * n) as f64;
            p *= z;
        }
        s
    }

    /// Trapezoid integration of `-log(1 - tz)/t` on `[0, 1]`, after substituting `t = s²`.
    fn integral(z: Complex64) -> Complex64 {
        let n = 20_000;
        let f = |s: f64| {
            if s == 0.0 {
                return 2.0 * z * 0.0;
            }
            let t = s * s;
            -(c(1.0, 0.0) - z * t).ln() / t * (2.0 * s)
        };
        let h = 1.0 / n as f64;
        let mut acc = (f(0.0) + f(1.0)) * 0.5;
        for k in 1..n {
            acc += f(k as f64 * h);
        }
        acc * h
    }

    #[test]
    fn special_values() {
        assert_eq!(li2(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let half = li2(c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(half.re, ZETA2 / 2.0 - 0.5 * 2f64.ln().powi(2), epsilon = 1e-14);
        assert_abs_diff_eq!(half.re, series(c(0.5, 0.0), 200).re, epsilon = 1e-14);
        assert_abs_diff_eq!(half.re, 0.582_240_526_5, epsilon = 1e-10);
        assert_abs_diff_eq!(li2(c(1.0, 0.0)).unwrap().re, ZETA2, epsilon = 1e-15);
        assert_abs_diff_eq!(li2(c(-1.0, 0.0)).unwrap().re, -ZETA2 / 2.0, epsilon = 1e-14);
        assert_eq!(li2(c(2.0, 0.0)), Err(DilogError::OnBranchCut(2.0)));
    }

    #[test]
    fn matches_series_inside_half_disc() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let z = c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            if z.norm() > 0.5 {
                continue;
            }
            assert!((li2(z).unwrap() - series(z, 80)).norm() < 1e-13, "{z}");
        }
    }

    #[test]
    fn matches_integral_elsewhere() {
        for z in [c(0.9, 0.3), c(-3.0, 1.0), c(2.0, 0.5), c(0.5, -2.0), c(-7.0, 0.0), c(0.99, 0.0)] {
            assert!((li2(z).unwrap() - integral(z)).norm() < 1e-7, "{z}");
        }
    }

    #[test]
    fn cut_limits() {
        for x in [1.5, 2.0, 10.0] {
            for (side, eps) in [(Side::Above, 1e-9), (Side::Below, -1e-9)] {
                let near = li2(c(x, eps)).unwrap();
                assert!((li2_side(c(x, 0.0), side) - near).norm() < 1e-7);
            }
        }
    }

    #[test]
    fn reflection_and_inversion() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let one = c(1.0, 0.0);
            let refl = li2(z).unwrap() + li2(one - z).unwrap() + z.ln() * (one - z).ln() - ZETA2;
            assert!(refl.norm() < 1e-11, "{z}");
            let inv = li2(z).unwrap() + li2(one / z).unwrap() + ZETA2 + 0.5 * (-z).ln().powi(2);
            assert!(inv.norm() < 1e-11, "{z}");
        }
    }

    fn five_term(x: f64, y: f64, norm: Normalization) -> Complex64 {
        let l = |v: f64| rogers_l(c(v, 0.0), norm).unwrap();
        l(x) + l(y) - l(x * y) - l(x * (1.0 - y) / (1.0 - x * y)) - l(y * (1.0 - x) / (1.0 - x * y))
    }

    #[test]
    fn rogers_five_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let (x, y) = (rng.gen_range(1e-6..1.0 - 1e-6), rng.gen_range(1e-6..1.0 - 1e-6));
            assert!(five_term(x, y, Normalization::Standard).norm() < 1e-11, "{x} {y}");
            // with L(1) = 0 the displayed combination is the constant π²/6
            assert!((five_term(x, y, Normalization::Shifted) - ZETA2).norm() < 1e-11);
        }
        let l = |v: f64| rogers_l(c(v, 0.0), Normalization::Standard).unwrap().re;
        assert_abs_diff_eq!(2.0 * l(0.5) - l(0.25) - 2.0 * l(1.0 / 3.0), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rogers_values() {
        let l = |v: f64, n| rogers_l(c(v, 0.0), n).unwrap().re;
        assert_eq!(l(1.0, Normalization::Shifted), 0.0);
        assert_abs_diff_eq!(l(0.5, Normalization::Standard), PI * PI / 12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l(0.5, Normalization::Shifted), -PI * PI / 12.0, epsilon = 1e-14);
        assert_eq!(rogers_l(c(-1.0, 0.0), Normalization::Standard), Err(DilogError::Domain(c(-1.0, 0.0))));
        assert!(rogers_l(c(2.0, 0.0), Normalization::Standard).is_err());
        // reflection: L(x) + L(1 - x) is L(1), so -π²/6 once shifted
        for x in [0.1, 0.37, 0.8] {
            assert_abs_diff_eq!(l(x, Normalization::Standard) + l(1.0 - x, Normalization::Standard), ZETA2, epsilon = 1e-13);
            assert_abs_diff_eq!(l(x, Normalization::Shifted) + l(1.0 - x, Normalization::Shifted), -ZETA2, epsilon = 1e-13);
        }
    }

    #[test]
    fn mod_period_arithmetic() {
        let half = PI * PI / 2.0;
        let a = mod_pi_sq_half(c(1.0, 0.5));
        assert!(a.approx_eq(&mod_pi_sq_half(c(1.0 + 3.0 * half, 0.5)), 1e-12));
        assert!(!a.approx_eq(&mod_pi_sq_half(c(1.0 + half / 3.0, 0.5)), 1e-6));
        assert!(a.with_period(half / 3.0).approx_eq(&mod_pi_sq_half(c(1.0 + half / 3.0, 0.5)).with_period(half / 3.0), 1e-12));
        assert!(mod_pi_sq_half(c(-0.1, 0.0)).reduced().re > 0.0);
    }

    #[test]
    fn lift_examples() {
        let x = ITetrahedron::from_w0(1, c(0.5, 0.0), [0, 0, 1]).unwrap();
        let r = rogers_lift(&x).unwrap();
        assert!((r.value - c(-PI * PI / 12.0, 0.0)).norm() < 1e-14);
        let neg = ITetrahedron { sign: -1, ..x.clone() };
        assert!((rogers_lift(&neg).unwrap().value + r.value).norm() < 1e-14);
        // real w0 in (0,1) with c1 ≠ 0: purely imaginary shift (iπ/2)·c1·log w0
        let shifted = ITetrahedron::from_w0(1, c(0.5, 0.0), [0, 1, 0]).unwrap();
        let d = rogers_lift(&shifted).unwrap().value - r.value;
        assert!((d - c(0.0, -PI / 2.0 * 0.5f64.ln())).norm() < 1e-14);
        assert_eq!(rogers_lift_of_class(&[]).unwrap().value, c(0.0, 0.0));
    }

    fn random_tet(rng: &mut ChaCha8Rng) -> ITetrahedron {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let w0 = c(rng.gen_range(-2.0..2.0), sign as f64 * rng.gen_range(0.05..2.0));
        let c0 = rng.gen_range(-3..=3);
        let c1 = rng.gen_range(-3..=3);
        ITetrahedron::from_w0(sign, w0, [c0, c1, 1 - c0 - c1]).unwrap()
    }

    /// The literal display: flattening term `(iπ/2)(-c0' log w1 + c1' log w0)`.
    fn literal_display(x: &ITetrahedron) -> ModPiSqHalf {
        let star = x.sign as f64;
        let l = rogers_l(x.w[0], Normalization::Shifted).unwrap();
        let flat = Complex64::new(0.0, PI / 2.0) * (-(x.charge[0] as f64) * x.w[1].ln() + x.charge[1] as f64 * x.w[0].ln());
        mod_pi_sq_half(star * l + flat)
    }

    fn invariant_under(s: &Perm4, period: f64, lift: impl Fn(&ITetrahedron) -> ModPiSqHalf) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        (0..100).all(|_| {
            let x = random_tet(&mut rng);
            lift(&x).with_period(period).approx_eq(&lift(&x.act(s)).with_period(period), MOD_TOL)
        })
    }

    #[test]
    fn lift_symmetries() {
        let half = PI * PI / 2.0;
        let lift = |x: &ITetrahedron| rogers_lift(x).unwrap();
        for s in perm::all() {
            assert!(invariant_under(&s, half / 3.0, lift), "{s:?}");
            // mod π²/2 only the permutations fixing the pair (01)(23) survive
            let fixes_slot0 = crate::scissors::slot_of(s[0] as usize, s[1] as usize) == 0;
            assert_eq!(invariant_under(&s, half, lift), fixes_slot0, "{s:?}");
        }
        for s in [[1, 0, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2]] {
            assert!(!invariant_under(&s, half / 3.0, literal_display), "{s:?}");
        }
    }

    /// Log-parameters `log w_j ∓ iπ c_j` of a tetrahedron.
    fn log_params(x: &ITetrahedron) -> [Complex64; 3] {
        std::array::from_fn(|j| x.w[j].ln() - Complex64::new(0.0, PI * x.sign as f64 * x.charge[j] as f64))
    }

    /// Output log-parameters forced by exact edge balance, with `ABDE[0] = a`.
    fn balanced_outputs(acde: &[Complex64; 3], abce: &[Complex64; 3], a: Complex64) -> [[Complex64; 3]; 3] {
        let (l1, l2) = (abce[0] - a, acde[0] - a);
        let l_bcad = abce[1] - l2;
        [
            [a, acde[1] + abce[1], acde[2] - l_bcad],
            [l2, acde[1] - l1, acde[2] + abce[0]],
            [l1, l_bcad, acde[0] + abce[2]],
        ]
    }

    /// Lift of an output tetrahedron under the given log-parameters.
    fn lift_with(x: &ITetrahedron, ell: &[Complex64; 3]) -> ModPiSqHalf {
        let one = Complex64::new(1.0, 0.0);
        let p = ((ell[0] - x.w[0].ln()) / Complex64::new(0.0, PI)).re.round() as i64;
        let q = ((ell[1] + (one - x.w[0]).ln()) / Complex64::new(0.0, PI)).re.round() as i64;
        rogers_lift_flattened(x.sign, x.w[0], p, q).unwrap()
    }

    fn random_transit(rng: &mut ChaCha8Rng) -> Option<(ITetrahedron, ITetrahedron, [ITetrahedron; 3])> {
        let x = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.05..2.0));
        let y = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.05..2.0));
        let acde = ITetrahedron::from_w0(1, x, [0, 0, 1]).ok()?;
        let abce = ITetrahedron::from_w0(1, y, [0, 0, 1]).ok()?;
        let out = ideal_transit(&acde, &abce, rng.gen_range(-2..=2)).ok()?;
        Some((acde, abce, out))
    }

    /// With balanced log-parameters the lift satisfies the five-term relation.
    #[test]
    fn lift_five_term_with_balanced_flattenings() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 300 {
            let Some((acde, abce, out)) = random_transit(&mut rng) else { continue };
            let (la, lb) = (log_params(&acde), log_params(&abce));
            let balanced = balanced_outputs(&la, &lb, log_params(&out[0])[0]);
            for (t, ell) in out.iter().zip(&balanced) {
                let s: Complex64 = ell.iter().sum();
                assert!(s.norm() < 1e-9);
                for j in 0..3 {
                    let k = (ell[j] - t.w[j].ln()) / Complex64::new(0.0, PI);
                    assert!((k.re - k.re.round()).abs() < 1e-9 && k.im.abs() < 1e-9);
                }
            }
            let before = rogers_lift_of_class(&[acde, abce]).unwrap();
            let after = out.iter().zip(&balanced).fold(mod_pi_sq_half(c(0.0, 0.0)), |acc, (t, l)| acc.add(&lift_with(t, l)));
            assert!(before.approx_eq(&after, MOD_TOL), "{:?} vs {:?}", before.reduced(), after.reduced());
            checked += 1;
        }
    }

    /// With the charges of the ideal transit the relation fails exactly when the
    /// charges are off the balanced log-parameters in a way the lift sees.
    #[test]
    fn lift_five_term_with_transit_charges() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (mut checked, mut held) = (0, 0);
        while checked < 300 {
            let Some((acde, abce, out)) = random_transit(&mut rng) else { continue };
            let before = rogers_lift_of_class(&[acde.clone(), abce.clone()]).unwrap();
            let after = rogers_lift_of_class(&out).unwrap();
            let balanced = balanced_outputs(&log_params(&acde), &log_params(&abce), log_params(&out[0])[0]);
            let unbalanced = out.iter().zip(&balanced).any(|(t, l)| (0..3).any(|j| (log_params(t)[j] - l[j]).norm() > 1e-9));
            if before.approx_eq(&after, MOD_TOL) {
                held += 1;
            } else {
                assert!(unbalanced);
            }
            checked += 1;
        }
        assert!(held > 200 && held < 300, "{held}");
    }
}
