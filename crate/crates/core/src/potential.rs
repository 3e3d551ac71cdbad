//! The double-well potential family F(u) = |1 - u²|^n / (2n), its derivative,
//! regime classification, and the closed-form constants attached to it.

use crate::error::{Error, Result};
use crate::quad;
use serde::{Deserialize, Serialize};

/// Relation between the well exponent n and the diffusion exponent p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// n < p: standing waves touch ±1 at finite x (compactons); layer
    /// patterns are exactly stationary.
    Subcritical,
    /// n = p: exponential decay of profiles; exponentially slow layer motion.
    Critical,
    /// n > p: algebraic decay of profiles; algebraically slow layer motion.
    Supercritical,
}

/// The pair (p, n) with the interface-width parameter ε.
///
/// `p > 1` is the diffusion exponent of (|u_x|^{p-2}u_x)_x, `n > 1` controls
/// the flatness of the wells of F at u = ±1, and `eps > 0` sets the layer
/// width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub p: f64,
    pub n: f64,
    pub eps: f64,
}

impl PotentialParams {
    pub fn new(p: f64, n: f64, eps: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::invalid("p", format!("must be finite and > 1, got {p}")));
        }
        if !(n.is_finite() && n > 1.0) {
            return Err(Error::invalid("n", format!("must be finite and > 1, got {n}")));
        }
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::invalid("eps", format!("must be finite and > 0, got {eps}")));
        }
        Ok(Self { p, n, eps })
    }

    pub fn regime(&self) -> Regime {
        if self.n < self.p {
            Regime::Subcritical
        } else if self.n == self.p {
            Regime::Critical
        } else {
            Regime::Supercritical
        }
    }

    /// F(u) = |1 - u²|^n / (2n). Nonnegative, zero exactly at u = ±1.
    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        let w = 1.0 - u * u;
        if self.n == 2.0 {
            w * w / 4.0
        } else if self.n == 4.0 {
            let s = w * w;
            s * s / 8.0
        } else if self.n == 3.0 {
            w * w * w.abs() / 6.0
        } else {
            w.abs().powf(self.n) / (2.0 * self.n)
        }
    }

    /// F'(u) = -u (1 - u²) |1 - u²|^{n-2}; the reaction term is -F'.
    ///
    /// Odd in u; vanishes at u ∈ {-1, 0, +1}. Written as
    /// -u·sign(w)·|w|^{n-1} so it stays finite for 1 < n < 2 where
    /// |w|^{n-2} alone would blow up at w = 0.
    #[inline]
    pub fn df(&self, u: f64) -> f64 {
        let w = 1.0 - u * u;
        if self.n == 2.0 {
            return -u * w;
        }
        if self.n == 4.0 {
            return -u * w * w * w;
        }
        if self.n == 3.0 {
            return -u * w * w.abs();
        }
        if w == 0.0 {
            return 0.0;
        }
        -u * w.signum() * w.abs().powf(self.n - 1.0)
    }

    /// F''(u) = |1 - u²|^{n-2} ((2n-1)u² - 1). Unbounded near ±1 when n < 2.
    #[inline]
    pub fn d2f(&self, u: f64) -> f64 {
        let w = 1.0 - u * u;
        let shape = (2.0 * self.n - 1.0) * u * u - 1.0;
        if self.n == 2.0 {
            return shape;
        }
        if w == 0.0 {
            // 0^{n-2}: zero for n > 2, singular for n < 2.
            return if self.n > 2.0 { 0.0 } else { f64::INFINITY * shape.signum() };
        }
        w.abs().powf(self.n - 2.0) * shape
    }

    /// sup of |F''| over [-1, 1]; finite iff n ≥ 2. Governs the explicit
    /// reaction step-size restriction.
    pub fn d2f_sup(&self) -> f64 {
        if self.n < 2.0 {
            return f64::INFINITY;
        }
        // |F''| on [-1,1] peaks either at u = 0 (value 1) or at the interior
        // extremum of |w|^{n-2}((2n-1)u²-1); sample densely, the function is
        // cheap and smooth.
        let mut sup: f64 = 0.0;
        for i in 0..=400 {
            let u = i as f64 / 400.0;
            let v = self.d2f(u).abs();
            if v > sup {
                sup = v;
            }
        }
        sup
    }

    /// Minimal transition energy c_p = (p/(p-1))^{(p-1)/p} ∫_{-1}^{1} F^{(p-1)/p} ds,
    /// evaluated by adaptive Gauss–Kronrod quadrature to 1e-10 absolute.
    pub fn transition_energy(&self) -> Result<f64> {
        transition_energy(self)
    }

    /// All closed-form constants bundled; see [`CriticalConstants`].
    pub fn constants(&self) -> Result<CriticalConstants> {
        CriticalConstants::for_params(self)
    }
}

/// Cap on the lazily evaluated exponent sequence k_m.
pub const K_SEQ_CAP: usize = 64;

/// Closed-form constants of the (p, n) family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalConstants {
    /// Minimal energy of a single -1 → +1 transition.
    pub c_p: f64,
    /// Linearization rate λ_p = 2^{1-1/p} (p-1)^{-1/p}; the n = p profile
    /// tails behave like 2·exp(-λ_p x/ε).
    pub lambda_p: f64,
    /// Wave steepness C_p = (1/(2(p-1)))^{1/p}; the n = p profile is
    /// tanh(C_p x/ε). Equals λ_p/2.
    pub cap_c_p: f64,
    /// α = (p-1)/p + 1/n, the ratio of the exponent recursion.
    pub alpha: f64,
    /// Limit exponent of the k-sequence: np/(n-p) - 1 for n > p, unbounded
    /// otherwise (the exponent can be chosen arbitrarily large).
    pub gamma_np: GammaExponent,
    p: f64,
    n: f64,
}

/// γ_{n,p} is finite only in the supercritical regime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GammaExponent {
    Finite(f64),
    Unbounded,
}

impl GammaExponent {
    pub fn finite(&self) -> Option<f64> {
        match self {
            GammaExponent::Finite(g) => Some(*g),
            GammaExponent::Unbounded => None,
        }
    }
}

impl CriticalConstants {
    pub fn for_params(params: &PotentialParams) -> Result<Self> {
        let (p, n) = (params.p, params.n);
        let lambda_p = 2f64.powf(1.0 - 1.0 / p) * (p - 1.0).powf(-1.0 / p);
        let cap_c_p = (1.0 / (2.0 * (p - 1.0))).powf(1.0 / p);
        let alpha = (p - 1.0) / p + 1.0 / n;
        let gamma_np = if n > p {
            GammaExponent::Finite(n * p / (n - p) - 1.0)
        } else {
            GammaExponent::Unbounded
        };
        Ok(Self { c_p: transition_energy(params)?, lambda_p, cap_c_p, alpha, gamma_np, p, n })
    }

    /// m-th term of the exponent sequence k_1 = 0, k_{m+1} = α(k_m + 1),
    /// 1-indexed and capped at `K_SEQ_CAP`.
    pub fn k(&self, m: usize) -> f64 {
        assert!(m >= 1 && m <= K_SEQ_CAP, "k-sequence index out of range");
        self.k_seq().nth(m - 1).expect("within cap")
    }

    /// Lazy iterator over k_1, k_2, ..., k_{K_SEQ_CAP}.
    ///
    /// Nondecreasing with limit γ_{n,p} when n > p; strictly increasing and
    /// unbounded when n ≤ p (α ≥ 1).
    pub fn k_seq(&self) -> impl Iterator<Item = f64> {
        let alpha = self.alpha;
        let mut next = 0.0f64;
        std::iter::from_fn(move || {
            let k = next;
            next = alpha * (k + 1.0);
            Some(k)
        })
        .take(K_SEQ_CAP)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> f64 {
        self.n
    }
}

/// c_p per its defining integral; the integrand F^{(p-1)/p} is continuous on
/// [-1, 1], so plain adaptive panels suffice for the 1e-10 tolerance.
pub fn transition_energy(params: &PotentialParams) -> Result<f64> {
    let (p, n) = (params.p, params.n);
    let expo = (p - 1.0) / p;
    let prefactor = (p / (p - 1.0)).powf(expo);
    let scale = 1.0 / (2.0 * n).powf(expo);
    // |1-s²|^{n(p-1)/p}, split at the interior kink candidates ±1 ∉ (−1,1)
    // interior, so a single smooth stretch.
    let inner = quad::gauss_kronrod(
        &|s: f64| (1.0 - s * s).abs().powf(n * expo),
        -1.0,
        1.0,
        1e-11,
    )?;
    Ok(prefactor * scale * inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(p: f64, n: f64) -> PotentialParams {
        PotentialParams::new(p, n, 0.1).unwrap()
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(PotentialParams::new(1.0, 2.0, 0.1).is_err());
        assert!(PotentialParams::new(2.0, 1.0, 0.1).is_err());
        assert!(PotentialParams::new(2.0, 2.0, 0.0).is_err());
        assert!(PotentialParams::new(f64::NAN, 2.0, 0.1).is_err());
    }

    #[test]
    fn regime_classification() {
        assert_eq!(params(4.0, 2.0).regime(), Regime::Subcritical);
        assert_eq!(params(2.0, 2.0).regime(), Regime::Critical);
        assert_eq!(params(2.0, 4.0).regime(), Regime::Supercritical);
    }

    #[test]
    fn potential_values() {
        // F(0) = 1/(2n); minima at ±1.
        assert_relative_eq!(params(2.0, 2.0).f(0.0), 0.25);
        assert_eq!(params(2.0, 2.0).f(1.0), 0.0);
        assert_eq!(params(2.0, 2.0).f(-1.0), 0.0);
        // Direct arithmetic: (0.75)^4/8.
        assert_relative_eq!(params(2.0, 4.0).f(0.5), 0.03955078125, epsilon = 1e-15);
        assert!(params(3.0, 2.5).f(1.7) > 0.0);
    }

    #[test]
    fn derivative_values() {
        assert_eq!(params(2.0, 3.0).df(0.0), 0.0);
        assert_relative_eq!(params(2.0, 2.0).df(0.5), -0.375, epsilon = 1e-15);
        // u = 2, n = 3: -2·(-3)·3 = 18.
        assert_relative_eq!(params(2.0, 3.0).df(2.0), 18.0, epsilon = 1e-12);
        assert_eq!(params(2.0, 1.5).df(1.0), 0.0);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        // Centered differences of F on 1000 points of [-2, 2]; u = ±1 are
        // excluded for n < 2 (F' is continuous there but F'' is not).
        let h = 1e-6;
        for &(p, n) in &[(2.0, 2.0), (2.0, 4.0), (4.0, 2.0), (3.0, 1.5), (2.5, 3.7)] {
            let pars = params(p, n);
            for i in 0..1000 {
                let u = -2.0 + 4.0 * (i as f64 + 0.5) / 1000.0;
                if n < 2.0 && (1.0 - u * u).abs() < 0.05 {
                    continue;
                }
                let fd = (pars.f(u + h) - pars.f(u - h)) / (2.0 * h);
                let exact = pars.df(u);
                let denom = exact.abs().max(1e-8);
                assert!(
                    (fd - exact).abs() / denom < 1e-6,
                    "p={p} n={n} u={u}: fd={fd}, exact={exact}"
                );
            }
        }
    }

    #[test]
    fn even_odd_symmetry() {
        let pars = params(2.5, 3.0);
        for i in 0..200 {
            let u = -2.0 + 4.0 * i as f64 / 199.0;
            assert_relative_eq!(pars.f(u), pars.f(-u), epsilon = 1e-15);
            assert_relative_eq!(pars.df(u), -pars.df(-u), epsilon = 1e-15);
        }
    }

    #[test]
    fn second_derivative() {
        // n = 2: F'' = 3u² - 1.
        assert_relative_eq!(params(2.0, 2.0).d2f(1.0), 2.0);
        assert_relative_eq!(params(2.0, 2.0).d2f(0.0), -1.0);
        // Degenerate wells flatten F'' at ±1 for n > 2.
        assert_eq!(params(2.0, 4.0).d2f(1.0), 0.0);
        // Finite-difference cross-check away from ±1.
        let pars = params(2.0, 3.4);
        let h = 1e-5;
        let fd = (pars.df(0.63 + h) - pars.df(0.63 - h)) / (2.0 * h);
        assert_relative_eq!(pars.d2f(0.63), fd, epsilon = 1e-6);
        assert!(params(2.0, 2.0).d2f_sup() >= 2.0);
        assert_eq!(params(2.0, 1.5).d2f_sup(), f64::INFINITY);
    }

    #[test]
    fn transition_energy_closed_forms() {
        // p = n = 2: c_2 = √2 ∫ (1-s²)/2 = 2√2/3.
        let c2 = transition_energy(&params(2.0, 2.0)).unwrap();
        assert_relative_eq!(c2, 2.0 * 2f64.sqrt() / 3.0, epsilon = 1e-12);
        // p = n = 4: Beta-function closed form (32/35)·6^{-3/4}.
        let c4 = transition_energy(&params(4.0, 4.0)).unwrap();
        assert_relative_eq!(c4, 32.0 / 35.0 * 6f64.powf(-0.75), epsilon = 1e-10);
    }

    #[test]
    fn transition_energy_is_deterministic_and_converged() {
        let a = transition_energy(&params(2.0, 2.0)).unwrap();
        let b = transition_energy(&params(2.0, 2.0)).unwrap();
        assert_eq!(a, b);
        // Re-evaluating with a much denser rule moves the value by < 1e-10.
        let pars = params(2.0, 2.0);
        let tight = (2.0f64).powf(0.5)
            * quad::gauss_kronrod(&|s: f64| pars.f(s).powf(0.5), -1.0, 1.0, 1e-13).unwrap();
        assert!((a - tight).abs() < 1e-10);
    }

    #[test]
    fn transition_energy_orientation_invariant() {
        // F is even, so integrating the reflected integrand changes nothing.
        let pars = params(3.0, 2.0);
        let expo = (pars.p - 1.0) / pars.p;
        let f = |s: f64| pars.f(s).powf(expo);
        let fwd = quad::gauss_kronrod(&f, -1.0, 1.0, 1e-12).unwrap();
        let refl = quad::gauss_kronrod(&|s| f(-s), -1.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(fwd, refl, epsilon = 1e-14);
    }

    #[test]
    fn constants_closed_forms() {
        let c = params(2.0, 2.0).constants().unwrap();
        assert_eq!(c.lambda_p, 2f64.sqrt());
        assert_eq!(c.cap_c_p, 0.5f64.sqrt());
        assert!((c.cap_c_p - 1.0 / 2f64.sqrt()).abs() <= f64::EPSILON);
        assert_relative_eq!(c.lambda_p, 2.0 * c.cap_c_p, epsilon = 1e-15);
        assert_eq!(c.gamma_np, GammaExponent::Unbounded);

        let c = params(2.0, 4.0).constants().unwrap();
        // γ_{4,2} = np/(n-p) - 1 = 3, matching 1 + 4/(n-2).
        assert_eq!(c.gamma_np, GammaExponent::Finite(3.0));
        assert_relative_eq!(c.gamma_np.finite().unwrap(), 1.0 + 4.0 / (4.0 - 2.0));
        assert_relative_eq!(c.alpha, 0.75);
    }

    #[test]
    fn k_sequence_recursion_and_limit() {
        let c = params(2.0, 4.0).constants().unwrap();
        let ks: Vec<f64> = c.k_seq().collect();
        assert_eq!(ks.len(), K_SEQ_CAP);
        assert_eq!(ks[0], 0.0);
        assert_relative_eq!(ks[1], 0.75);
        assert_relative_eq!(ks[2], 1.3125);
        // Strictly increasing, bounded by γ, converging to it at the cap.
        for w in ks.windows(2) {
            assert!(w[1] > w[0]);
            assert!(w[1] <= 3.0);
        }
        assert!((c.k(K_SEQ_CAP) - 3.0).abs() < 1e-6);
    }

    #[test]
    fn k_sequence_unbounded_for_subcritical_and_critical() {
        for &(p, n) in &[(2.0, 2.0), (4.0, 2.0)] {
            let c = params(p, n).constants().unwrap();
            assert!(c.alpha >= 1.0);
            let ks: Vec<f64> = c.k_seq().collect();
            for w in ks.windows(2) {
                assert!(w[1] > w[0]);
            }
            // Far beyond any fixed bound already at the cap.
            assert!(ks[K_SEQ_CAP - 1] > 50.0);
        }
    }
}
