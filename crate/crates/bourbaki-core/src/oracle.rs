//! Independent cross-checks by brute-force linear algebra: graded pieces of
//! kernels, images and submodules as dense matrices, ranks by fraction-free
//! (Bareiss) elimination over the integers or plain elimination over Fp.

use crate::field::{FieldElement, FieldSpec};
use crate::modgb::{FreeElement, FreeModule, GradedMap};
use crate::monomial::Monomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub max_degree: i64,
    /// Skip checks whose matrix would exceed this many cells.
    pub max_cells: u64,
}

impl OracleConfig {
    pub fn with_max_degree(max_degree: i64) -> OracleConfig {
        OracleConfig { max_degree, ..OracleConfig::default() }
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_degree: 8, max_cells: 6_000_000 }
    }
}

/// All monomials of total degree d, descending degrevlex. Deterministic.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; n];
    fill(&mut out, &mut exps, 0, d);
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn fill(out: &mut Vec<Monomial>, exps: &mut Vec<u16>, pos: usize, remaining: u32) {
    if pos + 1 == exps.len() {
        exps[pos] = remaining as u16;
        out.push(Monomial::from_exps(exps.clone()));
        exps[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[pos] = e as u16;
        fill(out, exps, pos + 1, remaining - e);
    }
    exps[pos] = 0;
}

/// Basis of the degree-t piece of a free module: (component, monomial).
pub fn module_basis(module: &FreeModule, t: i64) -> Vec<(usize, Monomial)> {
    let mut out = Vec::new();
    for (i, &a) in module.shifts.iter().enumerate() {
        let d = t - a;
        if d >= 0 {
            for m in monomials_of_degree(module.n, d as u32) {
                out.push((i, m));
            }
        }
    }
    out
}

struct PieceMatrix {
    rows: usize,
    entries: Vec<Vec<FieldElement>>, // column-major
}

/// Columns spanning the degree-t piece of the submodule generated by `gens`
/// inside `module` (gens must be homogeneous).
fn span_columns(module: &FreeModule, gens: &[FreeElement], t: i64) -> PieceMatrix {
    let basis = module_basis(module, t);
    let index: HashMap<(usize, &Monomial), usize> = basis
        .iter()
        .enumerate()
        .map(|(k, (i, m))| ((*i, m), k))
        .collect();
    let mut entries = Vec::new();
    for g in gens {
        let Some(d) = g.degree(module) else { continue };
        if t - d < 0 {
            continue;
        }
        for m in monomials_of_degree(module.n, (t - d) as u32) {
            let prod = g.mul_term(&m, &module.field.one());
            let mut col = vec![module.field.zero(); basis.len()];
            for (i, p) in prod.comps.iter().enumerate() {
                for (mono, c) in p.terms() {
                    col[index[&(i, mono)]] = c.clone();
                }
            }
            entries.push(col);
        }
    }
    PieceMatrix { rows: basis.len(), entries }
}

fn rank(field: FieldSpec, m: PieceMatrix) -> usize {
    match field {
        FieldSpec::QQ => {
            let cols: Vec<Vec<BigInt>> = m
                .entries
                .iter()
                .map(|col| {
                    // clear denominators per column (column scaling keeps rank)
                    let mut lcm = BigInt::one();
                    for e in col {
                        if let FieldElement::Q(r) = e {
                            if !r.is_zero() {
                                lcm = lcm.lcm(r.denom());
                            }
                        }
                    }
                    col.iter()
                        .map(|e| match e {
                            FieldElement::Q(r) => {
                                (r.numer() * &lcm) / r.denom()
                            }
                            _ => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            bareiss_rank(m.rows, cols)
        }
        FieldSpec::Fp(p) => {
            let cols: Vec<Vec<u32>> = m
                .entries
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|e| match e {
                            FieldElement::Fp { v, .. } => *v,
                            _ => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            fp_rank(p, m.rows, cols)
        }
    }
}

/// Fraction-free elimination; the matrix arrives column-major.
fn bareiss_rank(rows: usize, cols: Vec<Vec<BigInt>>) -> usize {
    let ncols = cols.len();
    let mut m: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..ncols).map(|j| cols[j][i].clone()).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..ncols {
                let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = t / &prev; // exact by Sylvester's identity
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

fn fp_rank(p: u32, rows: usize, cols: Vec<Vec<u32>>) -> usize {
    let ncols = cols.len();
    let p64 = p as u64;
    let mut m: Vec<Vec<u32>> = (0..rows)
        .map(|i| (0..ncols).map(|j| cols[j][i]).collect())
        .collect();
    let mut r = 0usize;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = crate::field::FieldElement::Fp { p, v: m[r][c] }.inv();
        let inv = match inv {
            crate::field::FieldElement::Fp { v, .. } => v as u64,
            _ => unreachable!(),
        };
        // normalize the pivot row once
        for j in c..ncols {
            m[r][j] = ((m[r][j] as u64 * inv) % p64) as u32;
        }
        for i in r + 1..rows {
            let f = m[i][c] as u64;
            if f == 0 {
                continue;
            }
            let neg = p64 - f;
            for j in c..ncols {
                m[i][j] = ((m[i][j] as u64 + m[r][j] as u64 * neg) % p64) as u32;
            }
        }
        r += 1;
    }
    r
}

/// rows x cols cell count of the degree-t matrix of a graded map.
pub fn map_matrix_cells(map: &GradedMap, t: i64) -> u64 {
    map.target.dim_at(t) * map.source.dim_at(t)
}

/// Rank of the degree-t piece of a graded map.
pub fn graded_map_rank(map: &GradedMap, t: i64) -> usize {
    let cols = span_columns(&map.target, &map.cols, t);
    rank(map.target.field, cols)
}

/// Dimension of ker(map)_t, by rank-nullity on the degree-t piece.
pub fn graded_kernel_dim(map: &GradedMap, t: i64) -> u64 {
    let src = map.source.dim_at(t);
    src - graded_map_rank(map, t) as u64
}

/// Dimension of the degree-t piece of the submodule generated by gens.
pub fn submodule_dim_bruteforce(module: &FreeModule, gens: &[FreeElement], t: i64) -> u64 {
    let cols = span_columns(module, gens, t);
    rank(module.field, cols) as u64
}

/// Hilbert function of F/<gens> at degree t by brute force.
pub fn quotient_dim_bruteforce(module: &FreeModule, gens: &[FreeElement], t: i64) -> u64 {
    module.dim_at(t) - submodule_dim_bruteforce(module, gens, t)
}

/// Dimension of the degree-t piece of an ideal given by homogeneous gens.
pub fn ideal_dim_bruteforce(
    n: usize,
    field: FieldSpec,
    gens: &[crate::poly::Polynomial],
    t: i64,
) -> u64 {
    let module = FreeModule::new(n, field, vec![0]);
    let wrapped: Vec<FreeElement> = gens
        .iter()
        .map(|p| FreeElement { comps: vec![p.clone()] })
        .collect();
    submodule_dim_bruteforce(&module, &wrapped, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgb::GradedMap;
    use crate::parse::parse_poly;

    fn qq(src: &str, n: usize) -> crate::poly::Polynomial {
        parse_poly(src, n, FieldSpec::QQ).unwrap()
    }

    #[test]
    fn monomial_enumeration() {
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        // strictly descending
        for w in ms.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert_eq!(monomials_of_degree(2, 0).len(), 1);
    }

    #[test]
    fn koszul_kernel_dims() {
        let n = 2;
        let field = FieldSpec::QQ;
        let target = FreeModule::new(n, field, vec![0]);
        let source = FreeModule::new(n, field, vec![1, 1]);
        let cols = vec![
            FreeElement { comps: vec![qq("x1", n)] },
            FreeElement { comps: vec![qq("x2", n)] },
        ];
        let map = GradedMap::new(source, target, cols);
        // kernel is R(-2): dims 0,0,1,2,3,...
        assert_eq!(graded_kernel_dim(&map, 0), 0);
        assert_eq!(graded_kernel_dim(&map, 1), 0);
        assert_eq!(graded_kernel_dim(&map, 2), 1);
        assert_eq!(graded_kernel_dim(&map, 3), 2);
        assert_eq!(graded_kernel_dim(&map, 5), 4);
    }

    #[test]
    fn ideal_piece_dimensions_match_series() {
        let n = 3;
        let field = FieldSpec::QQ;
        let gens = [qq("x1^2 + x2*x3", n), qq("x1*x3", n)];
        let gb = crate::modgb::ideal_gb(n, field, &gens);
        let hs = crate::hilbert::hilbert_of_ideal_quotient(n, field, &gb);
        for t in 0..8 {
            let brute = quotient_dim_bruteforce(
                &FreeModule::new(n, field, vec![0]),
                &gens
                    .iter()
                    .map(|p| FreeElement { comps: vec![p.clone()] })
                    .collect::<Vec<_>>(),
                t,
            );
            assert_eq!(brute as i64, hs.value_at(t), "degree {t}");
        }
    }

    #[test]
    fn ranks_agree_across_fields() {
        for p in [32003u32, 101] {
            let field = FieldSpec::Fp(p);
            let n = 3;
            let gens = [
                parse_poly("x1^2 + x2*x3", n, field).unwrap(),
                parse_poly("x1*x3", n, field).unwrap(),
            ];
            for t in 0..6 {
                let d = ideal_dim_bruteforce(n, field, &gens, t);
                let dq = ideal_dim_bruteforce(
                    3,
                    FieldSpec::QQ,
                    &[qq("x1^2 + x2*x3", 3), qq("x1*x3", 3)],
                    t,
                );
                assert_eq!(d, dq, "p={p} t={t}");
            }
        }
    }
}
