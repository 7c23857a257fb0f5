//! Invariants of a 2x4 matrix of forms: hypothesis validation, the numeric
//! invariants of Q = coker(Theta), the degree of the associated
//! codimension-two ideal computed both by the closed formula and by the
//! direct Hilbert-series route, and the derived checkers (equigenerated
//! ideals, row-wise comparison, torsion test, contraction criterion).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::field::FieldSpec;
use crate::hilbert::{
    coefficients, degree_at_fixed_dim, height_from_series, hilbert_of_ideal_quotient,
    hilbert_of_quotient, hilbert_of_submodule, hilbert_polynomial, krull_dimension_of_quotient,
    HilbertSeries,
};
use crate::modgb::{
    buchberger, ideal_gb, intersect_ideals, kernel, minimal_generators, FreeElement, FreeModule,
    GradedMap, KernelResult, ModuleOrder,
};
use crate::oracle;
use crate::parse::render_poly;
use crate::poly::Polynomial;
use crate::resolution::{depth_and_pd, minimal_resolution, shape_match, BettiTable, Shape};

/// Failures split by who is at fault: the input (standing hypotheses
/// violated) or the engine (a proved statement failed to hold).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    Validation(Vec<String>),
    Invariant(String),
}

impl std::fmt::Display for EngineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EngineError::Validation(v) => write!(f, "validation failed: {}", v.join("; ")),
            EngineError::Invariant(m) => write!(f, "invariant violated: {m}"),
        }
    }
}

impl std::error::Error for EngineError {}

fn invariant(msg: impl Into<String>) -> EngineError {
    EngineError::Invariant(msg.into())
}

/// A validated 2x4 matrix: rows homogeneous of degrees d1 <= d2, rank two,
/// and each row's entries generating an ideal of height at least two.
#[derive(Clone, Debug)]
pub struct ThetaMatrix {
    pub n: usize,
    pub field: FieldSpec,
    pub rows: Vec<Vec<Polynomial>>,
    pub d1: i64,
    pub d2: i64,
    /// The input rows were exchanged to enforce d1 <= d2.
    pub swapped: bool,
    /// Rows are gradients of a pair of forms (set by jacobian_theta).
    pub jacobian: bool,
}

impl ThetaMatrix {
    pub fn d(&self) -> i64 {
        self.d1 + self.d2
    }

    pub fn source(&self) -> FreeModule {
        FreeModule::new(self.n, self.field, vec![0; 4])
    }

    pub fn target(&self) -> FreeModule {
        FreeModule::new(self.n, self.field, vec![-self.d1, -self.d2])
    }

    /// The matrix as a degree-zero map R^4 -> R(d1) + R(d2).
    pub fn map(&self) -> GradedMap {
        let cols = (0..4)
            .map(|j| FreeElement {
                comps: vec![self.rows[0][j].clone(), self.rows[1][j].clone()],
            })
            .collect();
        GradedMap::new(self.source(), self.target(), cols)
    }

    /// One row as a map R^4 -> R(d_r).
    pub fn row_map(&self, r: usize) -> GradedMap {
        let dr = if r == 0 { self.d1 } else { self.d2 };
        let cols = (0..4)
            .map(|j| FreeElement { comps: vec![self.rows[r][j].clone()] })
            .collect();
        GradedMap::new(
            self.source(),
            FreeModule::new(self.n, self.field, vec![-dr]),
            cols,
        )
    }

    /// Nonzero entries of one row.
    pub fn row_ideal(&self, r: usize) -> Vec<Polynomial> {
        self.rows[r].iter().filter(|p| !p.is_zero()).cloned().collect()
    }

    /// 2-minor on columns i < j (zero-based): f_i g_j - f_j g_i.
    pub fn minor(&self, i: usize, j: usize) -> Polynomial {
        self.rows[0][i]
            .mul(&self.rows[1][j])
            .sub(&self.rows[0][j].mul(&self.rows[1][i]))
    }

    pub fn render_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(render_poly).collect())
            .collect()
    }
}

/// Check the standing hypotheses and normalize the row order. Coprimality
/// of a row is tested as height(row ideal) >= 2, which is equivalent to
/// gcd = 1 for homogeneous entries in a polynomial ring.
pub fn validate(
    rows: Vec<Vec<Polynomial>>,
    n: usize,
    field: FieldSpec,
) -> Result<ThetaMatrix, EngineError> {
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 4) {
        return Err(EngineError::Validation(vec!["matrix must be 2x4".into()]));
    }
    let mut errs = Vec::new();
    let mut degs = [0i64; 2];
    for (i, row) in rows.iter().enumerate() {
        if row.iter().any(|p| p.nvars() != n || p.field() != field) {
            errs.push(format!("row {}: entry over the wrong ring", i + 1));
            continue;
        }
        let nz: Vec<&Polynomial> = row.iter().filter(|p| !p.is_zero()).collect();
        if nz.is_empty() {
            errs.push(format!("row {}: all entries vanish (rank < 2)", i + 1));
            continue;
        }
        let d0 = nz[0].degree().unwrap();
        if nz.iter().any(|p| !p.is_homogeneous() || p.degree() != Some(d0)) {
            errs.push(format!(
                "row {}: inhomogeneous (all entries must be forms of one degree)",
                i + 1
            ));
            continue;
        }
        degs[i] = d0 as i64;
        if nz.iter().any(|p| p.is_constant()) {
            continue; // unit row ideal
        }
        let gens: Vec<Polynomial> = nz.into_iter().cloned().collect();
        let gb = ideal_gb(n, field, &gens);
        let hs = hilbert_of_ideal_quotient(n, field, &gb);
        let ht = height_from_series(n, &hs);
        if ht <= 1 {
            errs.push(format!(
                "row {}: entries generate an ideal of height {ht} <= 1 (common factor)",
                i + 1
            ));
        }
    }
    let rank2 = (0..4).any(|i| {
        ((i + 1)..4).any(|j| {
            !rows[0][i]
                .mul(&rows[1][j])
                .sub(&rows[0][j].mul(&rows[1][i]))
                .is_zero()
        })
    });
    if !rank2 {
        errs.push("rank < 2: all six 2-minors vanish".into());
    }
    if !errs.is_empty() {
        return Err(EngineError::Validation(errs));
    }
    let (rows, d1, d2, swapped) = if degs[0] <= degs[1] {
        (rows, degs[0], degs[1], false)
    } else {
        let mut it = rows.into_iter();
        let top = it.next().unwrap();
        let bot = it.next().unwrap();
        (vec![bot, top], degs[1], degs[0], true)
    };
    Ok(ThetaMatrix { n, field, rows, d1, d2, swapped, jacobian: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub free: bool,
    pub nearly_free: bool,
    pub three_syzygy: bool,
    pub br_shape: bool,
    pub compressible: bool,
}

#[derive(Clone, Debug)]
pub struct BourbakiReport {
    pub n: usize,
    pub field: FieldSpec,
    pub d1: i64,
    pub d2: i64,
    pub d: i64,
    /// Initial degree of the syzygy module.
    pub e: i64,
    pub e0: i64,
    pub e1_raw: i64,
    pub e1_paper: i64,
    pub q_theta: i64,
    pub ell_q: i64,
    /// Twist of the ideal embedding: s = e - d + e0.
    pub s: i64,
    /// None exactly in the compressible case e = 0.
    pub bour_formula: Option<i64>,
    pub bour_direct: Option<i64>,
    /// None when Q = 0 (a rank-2 matrix of constants).
    pub dim_q: Option<u32>,
    pub depth_q: usize,
    pub pd_q: usize,
    pub shape: Shape,
    pub flags: Flags,
    pub betti_q: BettiTable,
    pub betti_syz: BettiTable,
    pub syz_gen_degrees: Vec<i64>,
    /// The chosen minimal generator of the initial degree, rendered.
    pub nu: Option<Vec<String>>,
    pub hilb_q: HilbertSeries,
    pub hp_q: Vec<BigRational>,
    pub bounds_ok: bool,
}

/// Minimal Betti table of the syzygy module itself, resolved as G0/K1 for
/// a minimal generating set G0. (The tail of the resolution of Q only sees
/// this when e >= 1; redundant presentation columns carry free summands.)
fn syz_betti(src: &FreeModule, syz_min: &[FreeElement]) -> BettiTable {
    let shifts: Vec<i64> = syz_min.iter().map(|v| v.degree(src).unwrap()).collect();
    let g0 = FreeModule::new(src.n, src.field, shifts);
    let pres = GradedMap::new(g0.clone(), src.clone(), syz_min.to_vec());
    let k1 = kernel(&pres);
    let k1_min = minimal_generators(&g0, ModuleOrder::plain(), &k1.kernel_gens);
    let shifts1: Vec<i64> = k1_min.iter().map(|v| v.degree(&g0).unwrap()).collect();
    let rel = GradedMap::new(FreeModule::new(src.n, src.field, shifts1), g0, k1_min);
    minimal_resolution(&rel).betti()
}

pub fn analyze(theta: &ThetaMatrix) -> Result<BourbakiReport, EngineError> {
    let n = theta.n;
    let src = theta.source();
    let map = theta.map();
    let kres = kernel(&map);

    let hs_q = hilbert_of_quotient(&theta.target(), &kres.image_gb);
    let inv = coefficients(&hs_q).map_err(invariant)?;

    let syz_min = minimal_generators(&src, ModuleOrder::plain(), &kres.kernel_gens);
    if syz_min.is_empty() {
        return Err(invariant("the syzygy module of a rank-2 matrix cannot vanish"));
    }
    let syz_gen_degrees: Vec<i64> =
        syz_min.iter().map(|v| v.degree(&src).unwrap()).collect();
    let e = syz_gen_degrees[0];

    let (d1, d2, d) = (theta.d1, theta.d2, theta.d());
    let e0 = inv.e0;
    let e1_raw = inv.e1_raw;
    let q_theta = d1 * d1 + d2 * d2 + d1 * d2;
    let ell_q = (e0 * e0 + e0) / 2;
    let s = e - d + e0;

    let res = minimal_resolution(&map);
    if !res.composites_vanish() {
        return Err(invariant("resolution differentials do not compose to zero"));
    }
    if !res.euler_series().series_eq(&hs_q) {
        return Err(invariant(
            "resolution Euler characteristic disagrees with the Hilbert series",
        ));
    }
    let betti_q = res.betti();
    let (depth_q, pd_q) = depth_and_pd(&res);
    let shape = shape_match(&betti_q, d1, d2);

    let betti_syz = syz_betti(&src, &syz_min);
    if e >= 1 {
        let tail: BTreeMap<(usize, i64), usize> = betti_q
            .entries
            .iter()
            .filter(|((i, _), _)| *i >= 2)
            .map(|(&(i, deg), &r)| ((i - 2, deg), r))
            .collect();
        if tail != betti_syz.entries {
            return Err(invariant(
                "syzygy Betti numbers disagree with the tail of the resolution of Q",
            ));
        }
    }

    let compressible = e == 0;
    let mut bour_formula = None;
    let mut bour_direct = None;
    let mut nu = None;
    if compressible {
        // a constant syzygy splits off: Syz = R + R(e0 - d)
        let mut expect: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        *expect.entry((0, 0)).or_insert(0) += 1;
        *expect.entry((0, d - e0)).or_insert(0) += 1;
        if betti_syz.entries != expect {
            return Err(invariant(format!(
                "compressible case must split as R + R({}); computed table: {}",
                e0 - d,
                betti_syz
            )));
        }
    } else {
        bour_formula = Some((e - d) * (e + e0) + q_theta + ell_q + e1_raw);
        // the order-least generator of the initial degree; any minimal
        // generator of degree e gives the same answer
        let syz_gb = buchberger(&src, ModuleOrder::plain(), &syz_min);
        let least = syz_gb
            .elems
            .iter()
            .find(|v| v.degree(&src) == Some(e))
            .ok_or_else(|| invariant("no basis element of the initial degree"))?;
        let direct = direct_degree(theta, &kres, least)?;
        bour_direct = Some(direct);
        nu = Some(least.comps.iter().map(render_poly).collect());
        if bour_formula != bour_direct {
            return Err(invariant(format!(
                "formula degree {} disagrees with the direct computation {}",
                bour_formula.unwrap(),
                direct
            )));
        }
    }

    let flags = Flags {
        free: shape == Shape::Free,
        nearly_free: shape == Shape::NearlyFree,
        three_syzygy: shape == Shape::NearlyFree || shape == Shape::ThreeSyzygy,
        br_shape: shape == Shape::BuchsbaumRim,
        compressible,
    };

    let mut problems: Vec<String> = Vec::new();
    if !(0 <= e && e <= d) {
        problems.push(format!("initial degree out of range: e = {e}, d = {d}"));
    }
    if !(0 <= e0 && e0 <= d) {
        problems.push(format!("e0 out of range: e0 = {e0}, d = {d}"));
    }
    if let Some(b) = bour_formula {
        let slack = q_theta + ell_q + e1_raw - b; // = (d - e)(e + e0) >= 0
        if slack < 0 {
            problems.push(format!("upper bound violated: slack {slack}"));
        }
        if (slack == 0) != (e == d) {
            problems.push("upper-bound equality must happen exactly at e = d".into());
        }
        if 4 * (b - q_theta - ell_q - e1_raw) < -(d + e0) * (d + e0) {
            problems.push("lower bound violated".into());
        }
        if (b == 0) != flags.free {
            problems.push(format!(
                "freeness must match a vanishing degree: free = {}, degree = {b}",
                flags.free
            ));
        }
    }
    if e0 == d {
        let total: usize = betti_syz.entries.values().sum();
        if betti_syz.projective_dimension() != 0 || total != 2 {
            problems.push("maximal e0 must force a free rank-2 syzygy module".into());
        }
    }
    if let Some(dq) = inv.dim {
        if (dq as i64) <= n as i64 - 3 {
            if bour_formula != Some(q_theta) {
                problems.push("small quotient must give the quadratic normal value".into());
            }
            if e != d || e0 != 0 || e1_raw != 0 {
                problems.push("small quotient must force e = d and e0 = e1 = 0".into());
            }
            if d1 >= 1 && shape != Shape::BuchsbaumRim {
                problems.push("small quotient must have the length-3 determinantal shape".into());
            }
        }
    }
    if !problems.is_empty() {
        return Err(invariant(problems.join("; ")));
    }

    Ok(BourbakiReport {
        n,
        field: theta.field,
        d1,
        d2,
        d,
        e,
        e0,
        e1_raw,
        e1_paper: inv.e1,
        q_theta,
        ell_q,
        s,
        bour_formula,
        bour_direct,
        dim_q: inv.dim,
        depth_q,
        pd_q,
        shape,
        flags,
        betti_q,
        betti_syz,
        syz_gen_degrees,
        nu,
        hp_q: hilbert_polynomial(&hs_q),
        hilb_q: hs_q,
        bounds_ok: true,
    })
}

/// deg(R/I_nu) for a minimal generating syzygy nu of degree e >= 1, via
///   Hilb_M = Hilb_Syz - t^e/(1-t)^n,   Hilb_{R/I} = 1/(1-t)^n - t^s Hilb_M,
/// read off at the fixed dimension n-2.
pub fn bourbaki_degree_direct(
    theta: &ThetaMatrix,
    nu: &FreeElement,
) -> Result<i64, EngineError> {
    let kres = kernel(&theta.map());
    direct_degree(theta, &kres, nu)
}

fn direct_degree(
    theta: &ThetaMatrix,
    kres: &KernelResult,
    nu: &FreeElement,
) -> Result<i64, EngineError> {
    let n = theta.n;
    let src = theta.source();
    let e = match nu.degree(&src) {
        Some(e) if e >= 1 => e,
        _ => {
            return Err(EngineError::Validation(vec![
                "the direct construction needs a generator of degree >= 1".into(),
            ]))
        }
    };
    if !theta.map().apply(nu).is_zero() {
        return Err(invariant("the chosen generator is not a syzygy"));
    }
    let hs_q = hilbert_of_quotient(&theta.target(), &kres.image_gb);
    let e0 = coefficients(&hs_q).map_err(invariant)?.e0;
    let s = e - theta.d() + e0;

    let syz_gb = buchberger(&src, ModuleOrder::plain(), &kres.kernel_gens);
    let hs_syz = hilbert_of_submodule(&src, &syz_gb);
    let pole = n as u32;
    let hs_m = hs_syz.sub(&HilbertSeries::from_parts(n, &[(e, 1)], pole));
    let hs_quot =
        HilbertSeries::from_parts(n, &[(0, 1)], pole).sub(&hs_m.shift(s));
    degree_at_fixed_dim(&hs_quot, n as u32 - 2).map_err(invariant)
}

/// The four canonical syzygies of degree d1 + d2: columns of the skew matrix
/// of signed complementary 2-minors
///   T = [   0   D34  -D24   D23 ]
///       [ -D34    0   D14  -D13 ]
///       [  D24  -D14    0   D12 ]
///       [ -D23   D13  -D12    0 ],
/// with D(i,j) = f_i g_j - f_j g_i. Each column is checked against Theta by
/// exact multiplication (Laplace expansion of a bordered 3x3 determinant).
pub fn psi_syzygies(theta: &ThetaMatrix) -> Vec<FreeElement> {
    let m = |i: usize, j: usize| theta.minor(i, j);
    let z = Polynomial::zero(theta.n, theta.field);
    let t = [
        [z.clone(), m(2, 3), m(1, 3).neg(), m(1, 2)],
        [m(2, 3).neg(), z.clone(), m(0, 3), m(0, 2).neg()],
        [m(1, 3), m(0, 3).neg(), z.clone(), m(0, 1)],
        [m(1, 2).neg(), m(0, 2), m(0, 1).neg(), z],
    ];
    let map = theta.map();
    (0..4)
        .map(|j| {
            let col = FreeElement { comps: (0..4).map(|i| t[i][j].clone()).collect() };
            assert!(map.apply(&col).is_zero(), "complementary-minor column is not a syzygy");
            col
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct EquiReport {
    pub base: BourbakiReport,
    /// Common degree of the three generators.
    pub deg_gens: i64,
    /// Multiplicity of R/J at the fixed dimension n-2.
    pub deg_rj: i64,
    pub dim_rj: Option<u32>,
    pub height: u32,
    pub pd_rj: usize,
    pub depth_rj: usize,
    pub betti_rj: BettiTable,
    /// Constant value of the Hilbert polynomial when dim R/J <= 1.
    pub tau: Option<i64>,
    pub ci: bool,
    pub perfect: bool,
    pub saturated: bool,
    pub aci: bool,
    pub value_class: String,
    pub identity_ok: bool,
    /// Empirical bound Bour <= e^2; logged when violated, never fatal.
    pub bound_e2_ok: bool,
}

/// Analysis of a three-equigenerated ideal J through its associated matrix
/// with rows (0,0,0,1) and (f1,f2,f3,0).
pub fn equigenerated(
    gens: &[Polynomial],
    n: usize,
    field: FieldSpec,
) -> Result<EquiReport, EngineError> {
    if gens.len() != 3 {
        return Err(EngineError::Validation(vec![
            "need exactly three generators".into(),
        ]));
    }
    let mut errs = Vec::new();
    for (i, f) in gens.iter().enumerate() {
        if f.nvars() != n || f.field() != field {
            errs.push(format!("generator {}: over the wrong ring", i + 1));
        } else if f.is_zero() || f.is_constant() || !f.is_homogeneous() {
            errs.push(format!(
                "generator {}: must be a nonzero form of positive degree",
                i + 1
            ));
        }
    }
    if !errs.is_empty() {
        return Err(EngineError::Validation(errs));
    }
    let d = gens[0].degree().unwrap() as i64;
    if gens.iter().any(|f| f.degree().unwrap() as i64 != d) {
        return Err(EngineError::Validation(vec![
            "generators must share one degree".into(),
        ]));
    }
    let gb = ideal_gb(n, field, gens);
    let hs_rj = hilbert_of_ideal_quotient(n, field, &gb);
    let dim_rj = krull_dimension_of_quotient(&hs_rj);
    let height = height_from_series(n, &hs_rj);
    if height <= 1 {
        return Err(EngineError::Validation(vec![format!(
            "ideal has height {height} <= 1 (common factor)"
        )]));
    }

    let zero = Polynomial::zero(n, field);
    let rows = vec![
        vec![zero.clone(), zero.clone(), zero.clone(), Polynomial::one(n, field)],
        vec![gens[0].clone(), gens[1].clone(), gens[2].clone(), zero],
    ];
    let theta = validate(rows, n, field)?;
    let base = analyze(&theta)?;

    let deg_rj = degree_at_fixed_dim(&hs_rj, n as u32 - 2).map_err(invariant)?;

    let pres = GradedMap::new(
        FreeModule::new(n, field, vec![d; 3]),
        FreeModule::new(n, field, vec![0]),
        gens.iter().map(|f| FreeElement { comps: vec![f.clone()] }).collect(),
    );
    let res = minimal_resolution(&pres);
    if !res.euler_series().series_eq(&hs_rj) {
        return Err(invariant("quotient resolution disagrees with its Hilbert series"));
    }
    let betti_rj = res.betti();
    let (depth_rj, pd_rj) = depth_and_pd(&res);

    let ci = height == 3;
    let perfect = pd_rj == 2;
    let saturated = pd_rj <= n - 1;
    let aci = height == 2 && betti_rj.rank(1) == 3;

    let tau = match dim_rj {
        Some(dim) if dim <= 1 => {
            let hp = hilbert_polynomial(&hs_rj);
            let c = hp.first().cloned().unwrap_or_else(|| BigRational::from_integer(0.into()));
            if !c.is_integer() {
                return Err(invariant("constant Hilbert polynomial must be an integer"));
            }
            Some(c.to_integer().to_i64().ok_or_else(|| invariant("tau overflow"))?)
        }
        _ => None,
    };

    let mut problems = Vec::new();
    let mut value_class = "compressible".to_string();
    let mut identity_ok = true;
    let mut bound_e2_ok = true;
    if let Some(b) = base.bour_formula {
        let e = base.e;
        identity_ok = deg_rj + b == d * d + e * e - e * d;
        if !identity_ok {
            problems.push(format!(
                "identity deg(R/J) + degree = d^2 + e^2 - ed fails: {} + {} != {}",
                deg_rj,
                b,
                d * d + e * e - e * d
            ));
        }
        if (b == 0) != perfect {
            problems.push(format!(
                "a vanishing degree must characterize perfection: degree {b}, pd {pd_rj}"
            ));
        }
        if (b == d * d) != ci {
            problems.push(format!(
                "degree d^2 must characterize complete intersections: degree {b}, height {height}"
            ));
        }
        if b == d * d - 1 && b != 0 && b != d * d && !(e == d && deg_rj == 1) {
            problems.push("degree d^2 - 1 must force e = d and deg(R/J) = 1".into());
        }
        value_class = if b == 0 {
            "0"
        } else if b == d * d {
            "d^2"
        } else if b == d * d - 1 {
            "d^2-1"
        } else if b == 1 {
            "1"
        } else if b == 2 {
            "2"
        } else {
            "other"
        }
        .to_string();
        bound_e2_ok = b <= e * e;
        if !bound_e2_ok {
            eprintln!(
                "note: degree {} exceeds e^2 = {} on an equigenerated sample — open bound violated",
                b,
                e * e
            );
        }
    }
    if !problems.is_empty() {
        return Err(invariant(problems.join("; ")));
    }

    Ok(EquiReport {
        base,
        deg_gens: d,
        deg_rj,
        dim_rj,
        height,
        pd_rj,
        depth_rj,
        betti_rj,
        tau,
        ci,
        perfect,
        saturated,
        aci,
        value_class,
        identity_ok,
        bound_e2_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSide {
    /// Initial degree of the row's own syzygy module.
    pub e_row: i64,
    /// Twist making the comparison cokernel an ideal of codimension >= 2.
    pub s_row: i64,
    /// deg of R modulo that ideal, from the series difference.
    pub deg_direct: i64,
    /// Fixed-dimension-(n-2) multiplicity of the row ideal itself.
    pub deg_row_theta: i64,
    /// The closed formula in both coefficient variants (2*d1+1 and 2*d2+1).
    pub variant_2d1: i64,
    pub variant_2d2: i64,
    pub match_2d1: bool,
    pub match_2d2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReport {
    pub f: RowSide,
    pub g: RowSide,
}

/// Compare the full syzygy module against each row's: the quotient is a
/// rank-one torsion-free module, an ideal up to the twist that kills the
/// pole of order n-1. The closed formula for its degree is evaluated with
/// both candidate coefficients (2*d1+1 and 2*d2+1) and matched against the
/// direct computation.
pub fn row_wise(theta: &ThetaMatrix) -> Result<RowReport, EngineError> {
    let n = theta.n;
    let src = theta.source();
    let kres = kernel(&theta.map());
    let hs_q = hilbert_of_quotient(&theta.target(), &kres.image_gb);
    let inv = coefficients(&hs_q).map_err(invariant)?;
    let syz_gb = buchberger(&src, ModuleOrder::plain(), &kres.kernel_gens);
    let hs_syz = hilbert_of_submodule(&src, &syz_gb);

    let side = |r: usize| -> Result<RowSide, EngineError> {
        let rker = kernel(&theta.row_map(r));
        let rgb = buchberger(&src, ModuleOrder::plain(), &rker.kernel_gens);
        let e_row = rgb
            .initial_degree()
            .ok_or_else(|| invariant("a row syzygy module cannot vanish"))?;
        let hs_row = hilbert_of_submodule(&src, &rgb);
        let diff = hs_row.sub(&hs_syz).at_pole(n as u32);
        if diff.numer_at_one() != 1 {
            return Err(invariant("row comparison module must have rank one"));
        }
        let s_row = -diff.numer_derivative_at_one();
        let hs_quot = HilbertSeries::from_parts(n, &[(0, 1)], n as u32)
            .sub(&diff.shift(s_row));
        let deg_direct =
            degree_at_fixed_dim(&hs_quot, n as u32 - 2).map_err(invariant)?;

        let row_gens = theta.row_ideal(r);
        let rgb_ideal = ideal_gb(n, theta.field, &row_gens);
        let hs_row_ideal = hilbert_of_ideal_quotient(n, theta.field, &rgb_ideal);
        let deg_row_theta =
            degree_at_fixed_dim(&hs_row_ideal, n as u32 - 2).map_err(invariant)?;

        let (e0, e1_raw) = (inv.e0, inv.e1_raw);
        let v1 = (e0 * e0 - (2 * theta.d1 + 1) * e0) / 2 - e1_raw - deg_row_theta;
        let v2 = (e0 * e0 - (2 * theta.d2 + 1) * e0) / 2 - e1_raw - deg_row_theta;
        Ok(RowSide {
            e_row,
            s_row,
            deg_direct,
            deg_row_theta,
            variant_2d1: v1,
            variant_2d2: v2,
            match_2d1: v1 == deg_direct,
            match_2d2: v2 == deg_direct,
        })
    };
    Ok(RowReport { f: side(0)?, g: side(1)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmaxRecord {
    pub e_f: i64,
    pub e_g: i64,
    pub t: i64,
    /// Degree t + d1 + d2 where the torsion piece is inspected.
    pub checked_degree: i64,
    pub dim_intersection: u64,
    pub dim_product: u64,
    /// (J_f cap J_g) strictly larger than J_f * J_g in that degree.
    pub condition_holds: bool,
    pub e: i64,
}

/// The torsion criterion: a nonzero piece of (J_f cap J_g)/(J_f J_g) in
/// degree t + d1 + d2 forces the initial degree down to t = max(e_f, e_g).
pub fn lemma_emax_check(theta: &ThetaMatrix) -> Result<EmaxRecord, EngineError> {
    let n = theta.n;
    let src = theta.source();
    let row_indeg = |r: usize| -> Result<i64, EngineError> {
        let rker = kernel(&theta.row_map(r));
        let rgb = buchberger(&src, ModuleOrder::plain(), &rker.kernel_gens);
        rgb.initial_degree()
            .ok_or_else(|| invariant("a row syzygy module cannot vanish"))
    };
    let e_f = row_indeg(0)?;
    let e_g = row_indeg(1)?;
    let t = e_f.max(e_g);
    let checked_degree = t + theta.d();

    let jf = theta.row_ideal(0);
    let jg = theta.row_ideal(1);
    let inter = intersect_ideals(n, theta.field, &jf, &jg);
    let mut prod = Vec::with_capacity(jf.len() * jg.len());
    for a in &jf {
        for b in &jg {
            prod.push(a.mul(b));
        }
    }
    let dim_intersection = oracle::ideal_dim_bruteforce(n, theta.field, &inter, checked_degree);
    let dim_product = oracle::ideal_dim_bruteforce(n, theta.field, &prod, checked_degree);
    if dim_product > dim_intersection {
        return Err(invariant("a product cannot exceed the intersection"));
    }
    let condition_holds = dim_intersection != dim_product;

    let kres = kernel(&theta.map());
    let gb = buchberger(&src, ModuleOrder::plain(), &kres.kernel_gens);
    let e = gb
        .initial_degree()
        .ok_or_else(|| invariant("the syzygy module cannot vanish"))?;
    if condition_holds && e != t {
        return Err(invariant(format!(
            "nonzero torsion in degree {checked_degree} must force e = {t}, got e = {e}"
        )));
    }
    Ok(EmaxRecord {
        e_f,
        e_g,
        t,
        checked_degree,
        dim_intersection,
        dim_product,
        condition_holds,
        e,
    })
}

/// Rows = gradients of the pair (f, g) in four variables.
pub fn jacobian_theta(f: &Polynomial, g: &Polynomial) -> Result<ThetaMatrix, EngineError> {
    let mut errs = Vec::new();
    for (name, p) in [("f", f), ("g", g)] {
        if p.nvars() != 4 {
            errs.push(format!("{name}: gradient rows need exactly four variables"));
        } else if p.is_zero() || p.is_constant() || !p.is_homogeneous() {
            errs.push(format!("{name}: must be a form of positive degree"));
        }
    }
    if !errs.is_empty() {
        return Err(EngineError::Validation(errs));
    }
    let rows = vec![
        (0..4).map(|i| f.partial_derivative(i)).collect(),
        (0..4).map(|i| g.partial_derivative(i)).collect(),
    ];
    let mut theta = validate(rows, 4, f.field())?;
    theta.jacobian = true;
    Ok(theta)
}

#[derive(Clone, Debug)]
pub struct DistributionRecord {
    pub h1: Polynomial,
    pub h2: Polynomial,
    /// (h1, h2) is a regular sequence, i.e. the contraction ideal has
    /// height two.
    pub regular: bool,
}

/// Contract both rows against the Euler vector (x1,...,x4). The row span is
/// a distribution (closed under bracket) exactly when the two contractions
/// form a regular sequence.
pub fn distribution_check(theta: &ThetaMatrix) -> Result<DistributionRecord, EngineError> {
    if theta.n != 4 {
        return Err(EngineError::Validation(vec![
            "the contraction test needs n = 4".into(),
        ]));
    }
    let h = |r: usize| {
        let mut acc = Polynomial::zero(4, theta.field);
        for j in 0..4 {
            acc = acc.add(&theta.rows[r][j].mul(&Polynomial::var(4, j, theta.field)));
        }
        acc
    };
    let h1 = h(0);
    let h2 = h(1);
    let regular = if h1.is_zero() || h2.is_zero() {
        false
    } else {
        let gb = ideal_gb(4, theta.field, &[h1.clone(), h2.clone()]);
        let hs = hilbert_of_ideal_quotient(4, theta.field, &gb);
        krull_dimension_of_quotient(&hs) == Some(2)
    };
    Ok(DistributionRecord { h1, h2, regular })
}

/// Height-two test for a pair of forms; for gradient rows the contraction
/// flag must agree with this (each contraction is a scalar multiple of the
/// form, in characteristic zero).
pub fn pair_is_regular_sequence(f: &Polynomial, g: &Polynomial) -> bool {
    if f.is_zero() || g.is_zero() {
        return false;
    }
    let n = f.nvars();
    let gb = ideal_gb(n, f.field(), &[f.clone(), g.clone()]);
    let hs = hilbert_of_ideal_quotient(n, f.field(), &gb);
    height_from_series(n, &hs) == 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn qq(src: &str, n: usize) -> Polynomial {
        parse_poly(src, n, FieldSpec::QQ).unwrap()
    }

    fn theta(rows: [[&str; 4]; 2], n: usize) -> ThetaMatrix {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| qq(s, n)).collect())
            .collect();
        validate(parsed, n, FieldSpec::QQ).unwrap()
    }

    fn d2b1() -> ThetaMatrix {
        theta([["x1", "x2", "0", "x3"], ["0", "x1", "x2", "x4"]], 4)
    }

    #[test]
    fn rejects_the_documented_degenerations() {
        let prop = [["x1", "x2", "0", "x3"], ["2*x1", "2*x2", "0", "2*x3"]];
        let parsed: Vec<Vec<Polynomial>> = prop
            .iter()
            .map(|row| row.iter().map(|s| qq(s, 4)).collect())
            .collect();
        match validate(parsed, 4, FieldSpec::QQ) {
            Err(EngineError::Validation(v)) => {
                assert!(v.iter().any(|m| m.contains("rank")), "{v:?}")
            }
            other => panic!("expected a rank rejection, got {other:?}"),
        }

        let common = [["x1^2", "x1*x2", "x1*x3", "x1*x4"], ["0", "x1", "x2", "x4"]];
        let parsed: Vec<Vec<Polynomial>> = common
            .iter()
            .map(|row| row.iter().map(|s| qq(s, 4)).collect())
            .collect();
        match validate(parsed, 4, FieldSpec::QQ) {
            Err(EngineError::Validation(v)) => {
                assert!(v.iter().any(|m| m.contains("height")), "{v:?}")
            }
            other => panic!("expected a height rejection, got {other:?}"),
        }

        let mixed = [["x1", "x2^2", "0", "x3"], ["0", "x1", "x2", "x4"]];
        let parsed: Vec<Vec<Polynomial>> = mixed
            .iter()
            .map(|row| row.iter().map(|s| qq(s, 4)).collect())
            .collect();
        match validate(parsed, 4, FieldSpec::QQ) {
            Err(EngineError::Validation(v)) => {
                assert!(v.iter().any(|m| m.contains("inhomogeneous")), "{v:?}")
            }
            other => panic!("expected an inhomogeneity rejection, got {other:?}"),
        }
    }

    #[test]
    fn row_order_is_normalized() {
        let t = theta([["x1^2", "x2^2", "x3^2", "0"], ["x1", "x2", "0", "x3"]], 3);
        assert!(t.swapped);
        assert_eq!((t.d1, t.d2), (1, 2));
        assert_eq!(render_poly(&t.rows[0][3]), "x3");
    }

    #[test]
    fn d2b1_matches_the_worked_example() {
        let rep = analyze(&d2b1()).unwrap();
        assert_eq!((rep.d1, rep.d2, rep.d), (1, 1, 2));
        assert_eq!(rep.e, 2);
        assert_eq!((rep.e0, rep.e1_raw, rep.e1_paper), (0, -1, 1));
        assert_eq!((rep.q_theta, rep.ell_q, rep.s), (3, 0, 0));
        assert_eq!(rep.bour_formula, Some(2));
        assert_eq!(rep.bour_direct, Some(2));
        assert_eq!(rep.dim_q, Some(2));
        assert_eq!((rep.depth_q, rep.pd_q), (0, 4));
        assert_eq!(rep.shape, Shape::Other);
        assert_eq!(rep.syz_gen_degrees, vec![2; 5]);

        let expected: BTreeMap<(usize, i64), usize> = BTreeMap::from([
            ((0, -1), 2),
            ((1, 0), 4),
            ((2, 2), 5),
            ((3, 3), 4),
            ((4, 4), 1),
        ]);
        assert_eq!(rep.betti_q.entries, expected);
        let syz_expected: BTreeMap<(usize, i64), usize> =
            BTreeMap::from([((0, 2), 5), ((1, 3), 4), ((2, 4), 1)]);
        assert_eq!(rep.betti_syz.entries, syz_expected);

        // Hilbert polynomial of Q is t + 3
        let hp: Vec<String> = rep.hp_q.iter().map(|c| c.to_string()).collect();
        assert_eq!(hp, vec!["3", "1"]);
    }

    #[test]
    fn generic_linear_matrix_has_the_determinantal_shape() {
        let t = theta(
            [["x1", "x2", "x3", "x4"], ["x5", "x6", "x7", "x8"]],
            8,
        );
        let rep = analyze(&t).unwrap();
        // display twist: generators in degrees 0 and d2 - d1
        let c = rep.hilb_q.shift(rep.d2).canonical();
        assert_eq!(c.pole, 5);
        assert_eq!(c.numer, BTreeMap::from([(0, 2), (1, 2)]));
        assert_eq!((rep.e0, rep.e1_raw), (0, 0));
        assert_eq!(rep.e, 2);
        assert_eq!(rep.bour_formula, Some(3));
        assert_eq!(rep.q_theta, 3);
        assert_eq!(rep.shape, Shape::BuchsbaumRim);
        assert!(rep.flags.br_shape);

        let display = rep.betti_q.twisted(rep.d2);
        let expected: BTreeMap<(usize, i64), usize> = BTreeMap::from([
            ((0, 0), 2),
            ((1, 1), 4),
            ((2, 3), 4),
            ((3, 4), 2),
        ]);
        assert_eq!(display.entries, expected);
    }

    #[test]
    fn maximal_e0_forces_the_free_split() {
        let t = theta([["x1", "x2", "0", "0"], ["x2", "x3", "0", "0"]], 3);
        let rep = analyze(&t).unwrap();
        assert!(rep.flags.compressible);
        assert!(rep.flags.free);
        assert_eq!(rep.e, 0);
        assert_eq!(rep.e0, rep.d);
        assert_eq!(rep.bour_formula, None);
        assert_eq!(rep.betti_syz.entries, BTreeMap::from([((0, 0), 2)]));
    }

    #[test]
    fn nearly_free_with_codimension_one_quotient() {
        // two Jordan-type columns repeating the same parameter
        let t = theta([["x1", "0", "x2", "x3"], ["0", "x1", "2*x2", "2*x3"]], 3);
        let rep = analyze(&t).unwrap();
        assert_eq!(rep.e, 1);
        assert_eq!(rep.e0, 1);
        assert_eq!(rep.e1_paper, -1);
        assert_eq!(rep.bour_formula, Some(1));
        assert_eq!(rep.shape, Shape::NearlyFree);
    }

    #[test]
    fn psi_columns_are_honest_syzygies() {
        let t = d2b1();
        let psi = psi_syzygies(&t);
        assert_eq!(psi.len(), 4);
        let src = t.source();
        for col in &psi {
            assert_eq!(col.degree(&src), Some(2));
        }
        // they span a 4-dimensional subspace of the 5-dimensional degree-2
        // piece of the kernel
        assert_eq!(oracle::submodule_dim_bruteforce(&src, &psi, 2), 4);
        assert_eq!(oracle::graded_kernel_dim(&t.map(), 2), 5);
        assert_eq!(oracle::graded_kernel_dim(&t.map(), 1), 0);
    }

    #[test]
    fn quadrics_ideal_wrapper() {
        let gens = [
            qq("x1*x4", 4),
            qq("x2*x3", 4),
            qq("x1*x3 - x2*x4", 4),
        ];
        let rep = equigenerated(&gens, 4, FieldSpec::QQ).unwrap();
        assert_eq!(rep.base.bour_formula, Some(2));
        assert_eq!(rep.deg_rj, 2);
        assert_eq!(rep.base.e, 2);
        assert_eq!(rep.base.e1_paper, 2);
        assert_eq!(rep.height, 2);
        assert!(rep.aci && !rep.ci && !rep.perfect);
        assert!(rep.identity_ok && rep.bound_e2_ok);
        assert_eq!(rep.value_class, "2");
        assert_eq!(rep.tau, None);
    }

    #[test]
    fn complete_intersection_wrapper() {
        let gens = [qq("x1^2", 3), qq("x2^2", 3), qq("x3^2", 3)];
        let rep = equigenerated(&gens, 3, FieldSpec::QQ).unwrap();
        assert!(rep.ci);
        assert_eq!(rep.base.e, 2);
        assert_eq!(rep.base.bour_formula, Some(4));
        assert_eq!(rep.value_class, "d^2");
        assert_eq!(rep.deg_rj, 0);
        assert_eq!(rep.tau, Some(0));
        assert!(!rep.saturated); // the ideal is primary to the irrelevant one
        assert!(rep.identity_ok);
    }

    #[test]
    fn nonminimal_generators_are_compressible() {
        let gens = [qq("x1", 3), qq("x2", 3), qq("x1 + x2", 3)];
        let rep = equigenerated(&gens, 3, FieldSpec::QQ).unwrap();
        assert!(rep.base.flags.compressible);
        assert_eq!(rep.value_class, "compressible");
        assert!(!rep.aci);
        assert_eq!(rep.tau, Some(1));
    }

    #[test]
    fn row_wise_on_the_worked_example() {
        let rr = row_wise(&d2b1()).unwrap();
        assert_eq!(rr.f.e_row, 0);
        assert_eq!(rr.g.e_row, 0);
        // both rows are regular sequences of height three, so the degree
        // equals e1 and the divisorial correction vanishes
        for side in [&rr.f, &rr.g] {
            assert_eq!(side.deg_direct, 1);
            assert_eq!(side.deg_row_theta, 0);
            assert!(side.match_2d1 && side.match_2d2);
        }
    }

    #[test]
    fn swapping_equal_degree_rows_swaps_the_row_report() {
        let t = d2b1();
        let back = theta([["0", "x1", "x2", "x4"], ["x1", "x2", "0", "x3"]], 4);
        assert!(!back.swapped); // equal degrees: no normalization kicks in
        let a = row_wise(&t).unwrap();
        let b = row_wise(&back).unwrap();
        assert_eq!(a.f, b.g);
        assert_eq!(a.g, b.f);
    }

    #[test]
    fn torsion_condition_fails_on_the_worked_example() {
        let rec = lemma_emax_check(&d2b1()).unwrap();
        assert_eq!((rec.e_f, rec.e_g, rec.t), (0, 0, 0));
        assert_eq!(rec.checked_degree, 2);
        assert_eq!(rec.dim_intersection, rec.dim_product);
        assert!(!rec.condition_holds);
        assert_eq!(rec.e, 2); // and indeed e != t
    }

    #[test]
    fn gradient_rows_and_the_contraction_flag() {
        let f = qq("x1^2 + x2^2 + x3*x4", 4);
        let g = qq("x1*x2 + x2*x3 + x4^2", 4);
        let t = jacobian_theta(&f, &g).unwrap();
        assert!(t.jacobian);
        assert_eq!((t.d1, t.d2), (1, 1));
        let rec = distribution_check(&t).unwrap();
        assert!(rec.regular);
        assert!(pair_is_regular_sequence(&f, &g));
        // the contraction returns twice the original form
        assert_eq!(render_poly(&rec.h1), "2*x1^2 + 2*x2^2 + 2*x3*x4");

        assert!(matches!(
            jacobian_theta(&f, &f),
            Err(EngineError::Validation(_))
        ));
    }

    #[test]
    fn contraction_flag_on_the_worked_examples() {
        let rec = distribution_check(&d2b1()).unwrap();
        assert_eq!(render_poly(&rec.h1), "x1^2 + x2^2 + x3*x4");
        assert_eq!(render_poly(&rec.h2), "x1*x2 + x2*x3 + x4^2");
        assert!(rec.regular);

        // degenerate pencil: the contractions share the factor x1*x3 + x2*x4
        let t = theta(
            [["x3", "x4", "0", "0"], ["x1*x3", "x1*x4", "-x1*x2", "-x2^2"]],
            4,
        );
        let rec = distribution_check(&t).unwrap();
        assert!(!rec.regular);
        let rep = analyze(&t).unwrap();
        assert!(rep.flags.free);
        assert_eq!(rep.bour_formula, Some(0));
        assert_eq!((rep.e, rep.e0, rep.e1_raw), (1, 1, -4));
        assert_eq!(rep.betti_syz.entries, BTreeMap::from([((0, 1), 2)]));
    }
}
