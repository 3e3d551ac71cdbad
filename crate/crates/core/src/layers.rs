//! Piecewise-constant targets v with N jumps, transition-layer initial data,
//! exactly stationary N-layer states, and interface metrics.

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::potential::PotentialParams;
use crate::profiles;
use serde::{Deserialize, Serialize};

/// Sign of v on the leading subinterval [a, h_1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    #[inline]
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = Error;
    fn try_from(v: i8) -> Result<Self> {
        match v {
            -1 => Ok(Sign::Minus),
            1 => Ok(Sign::Plus),
            other => Err(Error::invalid("first_sign", format!("must be ±1, got {other}"))),
        }
    }
}

/// v: [a, b] → {-1, +1} with N jumps at a < h_1 < ... < h_N < b, alternating
/// from `first_sign` and taken right-continuous at the jumps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    a: f64,
    b: f64,
    jumps: Vec<f64>,
    first_sign: Sign,
}

impl StepFunction {
    pub fn new(a: f64, b: f64, jumps: Vec<f64>, first_sign: Sign) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid("domain", format!("need finite a < b, got [{a}, {b}]")));
        }
        for w in jumps.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::invalid(
                    "jumps",
                    format!("must be strictly increasing, got {} then {}", w[0], w[1]),
                ));
            }
        }
        if let (Some(&first), Some(&last)) = (jumps.first(), jumps.last()) {
            if !(a < first && last < b) {
                return Err(Error::invalid(
                    "jumps",
                    format!("must lie strictly inside ({a}, {b})"),
                ));
            }
        }
        if !jumps.iter().all(|h| h.is_finite()) {
            return Err(Error::invalid("jumps", "non-finite jump position".to_string()));
        }
        Ok(Self { a, b, jumps, first_sign })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn n_jumps(&self) -> usize {
        self.jumps.len()
    }

    pub fn first_sign(&self) -> Sign {
        self.first_sign
    }

    /// Value at x (right-continuous at the jumps).
    pub fn value_at(&self, x: f64) -> f64 {
        let crossed = self.jumps.partition_point(|&h| h <= x);
        if crossed % 2 == 0 {
            self.first_sign.as_f64()
        } else {
            -self.first_sign.as_f64()
        }
    }

    /// Value on the plateau right of jump index j (0-based).
    fn sign_after(&self, j: usize) -> f64 {
        if j % 2 == 0 {
            -self.first_sign.as_f64()
        } else {
            self.first_sign.as_f64()
        }
    }

    /// Jump set I[v] = {h_1, ..., h_N}.
    pub fn interface_set(&self) -> InterfaceSet {
        InterfaceSet { positions: self.jumps.clone() }
    }

    /// Transition midpoints m_1 = a, m_{j+1} = (h_j + h_{j+1})/2, m_{N+1} = b:
    /// the j-th transition owns [m_j, m_{j+1}] around h_j.
    fn midpoints(&self) -> Vec<f64> {
        let mut ms = Vec::with_capacity(self.jumps.len() + 1);
        ms.push(self.a);
        for w in self.jumps.windows(2) {
            ms.push(0.5 * (w[0] + w[1]));
        }
        ms.push(self.b);
        ms
    }
}

/// Supremum radius r with h_i + r < h_{i+1} - r, h_1 - r ≥ a, h_N + r ≤ b:
/// r = min( min_i (h_{i+1}-h_i)/2, h_1 - a, b - h_N ).
///
/// For a jump-free v the constraints are empty and half the domain width is
/// returned.
pub fn max_separation_radius(v: &StepFunction) -> f64 {
    let (a, b) = v.domain();
    match (v.jumps.first(), v.jumps.last()) {
        (Some(&first), Some(&last)) => {
            let mut r = (first - a).min(b - last);
            for w in v.jumps.windows(2) {
                r = r.min(0.5 * (w[1] - w[0]));
            }
            r
        }
        _ => 0.5 * (b - a),
    }
}

fn check_matching_domain(v: &StepFunction, grid: &Grid) -> Result<()> {
    let (a, b) = v.domain();
    let tol = 1e-12 * (b - a).abs().max(1.0);
    if (grid.a - a).abs() > tol || (grid.b - b).abs() > tol {
        return Err(Error::invalid(
            "grid",
            format!("grid domain [{}, {}] does not match v's [{a}, {b}]", grid.a, grid.b),
        ));
    }
    Ok(())
}

/// Glue shifted copies of a standing wave along the jumps of v:
/// u(x) = ±Φ_ε(x - h_j) on the midpoint cell around h_j, signs matching v.
fn glue_profile(v: &StepFunction, prof: &profiles::StandingWaveProfile, grid: &Grid) -> Field {
    if v.n_jumps() == 0 {
        return Field::constant(*grid, v.first_sign.as_f64());
    }
    let ms = v.midpoints();
    let mut values = Vec::with_capacity(grid.m);
    let mut j = 0usize;
    for x in grid.nodes() {
        while j + 1 < v.n_jumps() && x > ms[j + 1] {
            j += 1;
        }
        values.push(v.sign_after(j) * prof.sample(x - v.jumps[j]));
    }
    Field { grid: *grid, values }
}

/// N-transition-layer initial datum per the standing-wave construction;
/// converges to v in L¹ as ε → 0.
pub fn build_layer_datum(v: &StepFunction, params: &PotentialParams, grid: &Grid) -> Result<Field> {
    check_matching_domain(v, grid)?;
    let prof = profiles::standing_wave(params)?;
    Ok(glue_profile(v, &prof, grid))
}

/// Exactly stationary N-layer state for n < p: plateaus at ±1 outside the
/// ε·ȳ-neighborhoods of the jumps, compacton transitions inside. Requires
/// ε·ȳ strictly below the separation radius of v.
pub fn build_stationary_subcritical(
    v: &StepFunction,
    params: &PotentialParams,
    grid: &Grid,
) -> Result<Field> {
    check_matching_domain(v, grid)?;
    let xbar = profiles::support_radius(params)?;
    let r = max_separation_radius(v);
    if xbar >= r {
        return Err(Error::EpsilonTooLarge { eps_ybar: xbar, radius: r });
    }
    let prof = profiles::standing_wave(params)?;
    Ok(glue_profile(v, &prof, grid))
}

/// Stationary periodic state with N equidistant zeros h_i = a + (2i-1)(b-a)/(2N)
/// and u'(a) = u'(b) = 0, sampled from the periodic orbit whose zero spacing
/// solves T_ε(s̄) = (b-a)/N. Starts negative at a; negate for the mirror
/// solution.
pub fn build_stationary_periodic(
    n_layers: usize,
    params: &PotentialParams,
    grid: &Grid,
) -> Result<Field> {
    if n_layers == 0 {
        return Err(Error::invalid("n_layers", "need at least one zero".to_string()));
    }
    let t_target = (grid.b - grid.a) / n_layers as f64;
    let sbar = profiles::solve_amplitude_for_period(params, t_target)?;
    let prof = profiles::periodic_profile(params, sbar)?;
    let h1 = grid.a + 0.5 * t_target;
    Ok(Field::from_fn(*grid, |x| prof.sample(x - h1)))
}

/// Finite set of interface positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterfaceSet {
    positions: Vec<f64>,
}

impl InterfaceSet {
    pub fn new(mut positions: Vec<f64>) -> Self {
        positions.sort_by(f64::total_cmp);
        Self { positions }
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Interfaces of a field: connected components of the nodes with values in
/// the band K, each reported by its linear-interpolated zero crossings (one
/// position per crossing), or by the component midpoint if the component
/// does not straddle zero.
///
/// K must be a closed interval avoiding ±1; the default band is [-0.5, 0.5].
pub fn interfaces_of_field(u: &Field, band: (f64, f64)) -> InterfaceSet {
    let (k_lo, k_hi) = band;
    assert!(k_lo <= k_hi && k_lo > -1.0 && k_hi < 1.0, "band must be a closed interval inside (-1, 1)");
    let g = &u.grid;
    let vals = &u.values;
    let m = vals.len();

    let mut marked = vec![false; m];
    for i in 0..m {
        if vals[i] >= k_lo && vals[i] <= k_hi {
            marked[i] = true;
        }
    }

    // Zero crossings of the linear interpolant, tracked over nonzero signs so
    // exact nodal zeros count once. Only meaningful when 0 ∈ K.
    let mut crossings: Vec<f64> = Vec::new();
    if k_lo <= 0.0 && 0.0 <= k_hi {
        let mut last: Option<(usize, f64)> = None;
        for i in 0..m {
            let vi = vals[i];
            if vi == 0.0 {
                marked[i] = true;
                continue;
            }
            if let Some((j, vj)) = last {
                if vi.signum() != vj.signum() {
                    let xj = g.x(j);
                    let xi = g.x(i);
                    crossings.push(xj + (xi - xj) * (0.0 - vj) / (vi - vj));
                    marked[j] = true;
                    marked[i] = true;
                }
            }
            last = Some((i, vi));
        }
    }

    let mut positions = Vec::new();
    let mut i = 0usize;
    while i < m {
        if !marked[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < m && marked[i] {
            i += 1;
        }
        let (x_lo, x_hi) = (g.x(start), g.x(i - 1));
        let inside: Vec<f64> = crossings
            .iter()
            .copied()
            .filter(|&c| c >= x_lo - 0.5 * g.h() && c <= x_hi + 0.5 * g.h())
            .collect();
        if inside.is_empty() {
            positions.push(0.5 * (x_lo + x_hi));
        } else {
            positions.extend(inside);
        }
    }
    InterfaceSet::new(positions)
}

/// Hausdorff distance max{ sup_A inf_B |α-β|, sup_B inf_A |α-β| } between
/// non-empty finite sets; empty input is flagged distinctly because collapse
/// detection relies on it.
pub fn hausdorff_distance(a: &InterfaceSet, b: &InterfaceSet) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptyInterfaceSet("left operand"));
    }
    if b.is_empty() {
        return Err(Error::EmptyInterfaceSet("right operand"));
    }
    let directed = |from: &[f64], to: &[f64]| -> f64 {
        from.iter()
            .map(|&x| {
                to.iter()
                    .map(|&y| (x - y).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(directed(&a.positions, &b.positions).max(directed(&b.positions, &a.positions)))
}

/// Trapezoidal ‖u - v‖_{L¹} over the shared domain.
pub fn l1_distance(u: &Field, v: &StepFunction) -> f64 {
    u.values
        .iter()
        .enumerate()
        .map(|(i, &ui)| u.grid.weight(i) * (ui - v.value_at(u.grid.x(i))).abs())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(p: f64, n: f64, eps: f64) -> PotentialParams {
        PotentialParams::new(p, n, eps).unwrap()
    }

    /// The six-transition layout used throughout the experiments.
    fn figure_layout() -> StepFunction {
        StepFunction::new(-4.0, 4.0, vec![-3.4, -2.0, -0.5, 0.8, 2.2, 3.2], Sign::Minus).unwrap()
    }

    #[test]
    fn step_function_values_alternate() {
        let v = StepFunction::new(0.0, 4.0, vec![1.0, 2.0, 3.0], Sign::Minus).unwrap();
        assert_eq!(v.value_at(0.5), -1.0);
        assert_eq!(v.value_at(1.5), 1.0);
        assert_eq!(v.value_at(2.5), -1.0);
        assert_eq!(v.value_at(3.5), 1.0);
        // Right-continuity at the jump.
        assert_eq!(v.value_at(1.0), 1.0);
    }

    #[test]
    fn step_function_rejects_bad_input() {
        assert!(StepFunction::new(0.0, 1.0, vec![0.5, 0.4], Sign::Plus).is_err());
        assert!(StepFunction::new(0.0, 1.0, vec![0.0], Sign::Plus).is_err());
        assert!(StepFunction::new(0.0, 1.0, vec![1.0], Sign::Plus).is_err());
        assert!(Sign::try_from(2i8).is_err());
    }

    #[test]
    fn separation_radius_of_figure_layout() {
        // gaps/2: 0.7, 0.75, 0.65, 0.7, 0.5; boundary: 0.6, 0.8 → 0.5.
        assert_relative_eq!(max_separation_radius(&figure_layout()), 0.5);
    }

    #[test]
    fn separation_radius_single_jump() {
        let v = StepFunction::new(0.0, 2.0, vec![1.0], Sign::Minus).unwrap();
        assert_relative_eq!(max_separation_radius(&v), 1.0);
        let empty = StepFunction::new(0.0, 2.0, vec![], Sign::Plus).unwrap();
        assert_relative_eq!(max_separation_radius(&empty), 1.0);
    }

    #[test]
    fn layer_datum_has_n_sign_changes() {
        let v = figure_layout();
        let pars = params(2.0, 2.0, 0.1);
        let grid = Grid::resolving(-4.0, 4.0, 0.1, 8.0).unwrap();
        let u = build_layer_datum(&v, &pars, &grid).unwrap();
        assert_eq!(u.sign_changes(), 6);
        // Starts negative, per the layout's first sign.
        assert!(u.values[0] < 0.0);
    }

    #[test]
    fn layer_datum_l1_distance_shrinks_with_eps() {
        let v = StepFunction::new(-1.0, 1.0, vec![-0.3, 0.3], Sign::Minus).unwrap();
        let mut prev = f64::INFINITY;
        for &eps in &[0.2, 0.1, 0.05] {
            let pars = params(2.0, 2.0, eps);
            let grid = Grid::resolving(-1.0, 1.0, eps, 8.0).unwrap();
            let u = build_layer_datum(&v, &pars, &grid).unwrap();
            let d = l1_distance(&u, &v);
            assert!(d < prev, "ε={eps}: {d} not below {prev}");
            prev = d;
        }
    }

    #[test]
    fn layer_datum_degenerate_no_jumps() {
        let v = StepFunction::new(0.0, 1.0, vec![], Sign::Minus).unwrap();
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let u = build_layer_datum(&v, &params(2.0, 2.0, 0.1), &grid).unwrap();
        assert!(u.values.iter().all(|&x| x == -1.0));
    }

    #[test]
    fn subcritical_construction_has_exact_plateaus() {
        let v = StepFunction::new(-3.0, 3.0, vec![-1.0, 1.0], Sign::Minus).unwrap();
        let pars = params(4.0, 2.0, 0.05);
        let xbar = profiles::support_radius(&pars).unwrap();
        let grid = Grid::resolving(-3.0, 3.0, 0.05, 8.0).unwrap();
        let u = build_stationary_subcritical(&v, &pars, &grid).unwrap();
        for (i, x) in grid.nodes().enumerate() {
            if x <= -1.0 - xbar || x >= 1.0 + xbar {
                assert_eq!(u.values[i].abs(), 1.0, "plateau at x={x}");
            }
            if x >= -1.0 + xbar && x <= 1.0 - xbar {
                assert_eq!(u.values[i], 1.0, "middle plateau at x={x}");
            }
        }
    }

    #[test]
    fn subcritical_rejects_wide_interfaces() {
        // ε·ȳ ≈ 2.07 exceeds the separation radius 1.0 at ε = 1.
        let v = StepFunction::new(-3.0, 3.0, vec![-1.0, 1.0], Sign::Minus).unwrap();
        let grid = Grid::new(-3.0, 3.0, 301).unwrap();
        match build_stationary_subcritical(&v, &params(4.0, 2.0, 1.0), &grid) {
            Err(Error::EpsilonTooLarge { .. }) => {}
            other => panic!("expected EpsilonTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn periodic_construction_places_zeros_equidistantly() {
        let pars = params(2.0, 2.0, 0.1);
        let grid = Grid::resolving(0.0, 1.0, 0.1, 16.0).unwrap();
        let u = build_stationary_periodic(2, &pars, &grid).unwrap();
        let ifs = interfaces_of_field(&u, (-0.5, 0.5));
        assert_eq!(ifs.len(), 2);
        assert!((ifs.positions()[0] - 0.25).abs() < grid.h());
        assert!((ifs.positions()[1] - 0.75).abs() < grid.h());
        // Neumann compatibility: one-sided differences vanish at this order.
        let h = grid.h();
        let du_a = (u.values[1] - u.values[0]) / h;
        let du_b = (u.values[grid.m - 1] - u.values[grid.m - 2]) / h;
        let scale = u.values.iter().fold(0.0f64, |m, v| m.max(v.abs())) / h;
        assert!(du_a.abs() < 0.05 * scale, "u'(a) ≈ {du_a}");
        assert!(du_b.abs() < 0.05 * scale, "u'(b) ≈ {du_b}");
    }

    #[test]
    fn periodic_construction_many_layers_small_amplitude() {
        // Zero spacing (b-a)/N = 1/64; for p = n = 4 the period law
        // T ~ s̄^{1/2} forces a small amplitude (T(0.2) ≈ 0.121 ≫ 1/64).
        let pars = params(4.0, 4.0, 0.1);
        let sbar = profiles::solve_amplitude_for_period(&pars, 1.0 / 64.0).unwrap();
        assert!(sbar < 0.2, "expected small oscillation, got s̄ = {sbar}");
        let grid = Grid::new(0.0, 1.0, 2049).unwrap();
        let u = build_stationary_periodic(64, &pars, &grid).unwrap();
        assert_eq!(u.sign_changes(), 64);
    }

    #[test]
    fn interfaces_of_layer_datum() {
        let v = StepFunction::new(-4.0, 4.0, vec![-1.0, 1.0], Sign::Minus).unwrap();
        let pars = params(2.0, 2.0, 0.1);
        let grid = Grid::resolving(-4.0, 4.0, 0.1, 8.0).unwrap();
        let u = build_layer_datum(&v, &pars, &grid).unwrap();
        let ifs = interfaces_of_field(&u, (-0.5, 0.5));
        assert_eq!(ifs.len(), 2);
        assert!((ifs.positions()[0] + 1.0).abs() < grid.h());
        assert!((ifs.positions()[1] - 1.0).abs() < grid.h());
    }

    #[test]
    fn interfaces_trivial_cases() {
        let grid = Grid::new(0.0, 1.0, 101).unwrap();
        let plus = Field::constant(grid, 1.0);
        assert!(interfaces_of_field(&plus, (-0.5, 0.5)).is_empty());

        // Sampled step function: exactly the jump set, to grid resolution.
        let v = StepFunction::new(0.0, 1.0, vec![0.305, 0.705], Sign::Plus).unwrap();
        let u = Field::from_fn(grid, |x| v.value_at(x));
        let ifs = interfaces_of_field(&u, (-0.5, 0.5));
        assert_eq!(ifs.len(), 2);
        assert!((ifs.positions()[0] - 0.305).abs() <= 0.5 * grid.h());
        assert!((ifs.positions()[1] - 0.705).abs() <= 0.5 * grid.h());
    }

    #[test]
    fn hausdorff_examples() {
        let s = |v: Vec<f64>| InterfaceSet::new(v);
        assert_eq!(hausdorff_distance(&s(vec![0.0]), &s(vec![0.0])).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&s(vec![0.0, 1.0]), &s(vec![0.0])).unwrap(), 1.0);
        assert_eq!(hausdorff_distance(&s(vec![0.0, 2.0]), &s(vec![1.0])).unwrap(), 1.0);
        assert!(matches!(
            hausdorff_distance(&s(vec![]), &s(vec![0.0])),
            Err(Error::EmptyInterfaceSet(_))
        ));
    }

    #[test]
    fn l1_distance_cases() {
        let grid = Grid::new(0.0, 1.0, 101).unwrap();
        let v = StepFunction::new(0.0, 1.0, vec![0.5], Sign::Minus).unwrap();
        let u = Field::from_fn(grid, |x| v.value_at(x));
        assert_relative_eq!(l1_distance(&u, &v), 0.0);

        let ones = StepFunction::new(0.0, 1.0, vec![], Sign::Plus).unwrap();
        let zero = Field::constant(grid, 0.0);
        assert_relative_eq!(l1_distance(&zero, &ones), 1.0, epsilon = 1e-12);
    }

    proptest! {
        /// Metric axioms for the Hausdorff distance on non-empty finite sets.
        #[test]
        fn hausdorff_is_a_metric(
            xs in prop::collection::vec(-4.0f64..4.0, 1..6),
            ys in prop::collection::vec(-4.0f64..4.0, 1..6),
            zs in prop::collection::vec(-4.0f64..4.0, 1..6),
        ) {
            let a = InterfaceSet::new(xs);
            let b = InterfaceSet::new(ys);
            let c = InterfaceSet::new(zs);
            let dab = hausdorff_distance(&a, &b).unwrap();
            let dba = hausdorff_distance(&b, &a).unwrap();
            let dac = hausdorff_distance(&a, &c).unwrap();
            let dcb = hausdorff_distance(&c, &b).unwrap();
            prop_assert!((dab - dba).abs() < 1e-12);
            prop_assert!(hausdorff_distance(&a, &a).unwrap() == 0.0);
            prop_assert!(dab <= dac + dcb + 1e-12);
            prop_assert!(dab >= 0.0);
        }
    }
}
