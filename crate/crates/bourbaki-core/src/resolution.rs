//! Minimal graded free resolutions by iterated kernels, plus Betti tables
//! and the resolution-shape classifiers.

use crate::hilbert::HilbertSeries;
use crate::modgb::{
    kernel, minimal_generators, FreeElement, FreeModule, GradedMap, ModuleOrder,
};
use std::collections::BTreeMap;
use std::fmt;

/// beta(i, j) = number of generators of F_i in degree j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i64), usize>,
}

impl BettiTable {
    pub fn projective_dimension(&self) -> usize {
        self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    pub fn rank(&self, i: usize) -> usize {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .map(|(_, c)| *c)
            .sum()
    }

    pub fn degrees(&self, i: usize) -> BTreeMap<i64, usize> {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .map(|((_, d), c)| (*d, *c))
            .collect()
    }

    /// Same table with every generator degree shifted (used to present the
    /// second-row-normalized convention alongside the absolute one).
    pub fn twisted(&self, by: i64) -> BettiTable {
        BettiTable {
            entries: self
                .entries
                .iter()
                .map(|((i, d), c)| ((*i, d + by), *c))
                .collect(),
        }
    }
}

impl fmt::Display for BettiTable {
    /// One line per homological degree: `i: deg^mult ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pd = self.projective_dimension();
        for i in 0..=pd {
            write!(f, "{i}:")?;
            for (d, c) in self.degrees(i) {
                write!(f, " {d}^{c}")?;
            }
            if i < pd {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// maps[k] : modules[k+1] -> modules[k]; modules[0] is F0.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub modules: Vec<FreeModule>,
    pub maps: Vec<GradedMap>,
}

impl Resolution {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn betti(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for (i, module) in self.modules.iter().enumerate() {
            for &a in &module.shifts {
                *entries.entry((i, a)).or_insert(0) += 1;
            }
        }
        BettiTable { entries }
    }

    /// Alternating sum of the free modules' series = series of the cokernel,
    /// provided the complex is exact; used as a consistency check.
    pub fn euler_series(&self) -> HilbertSeries {
        let n = self.modules[0].n;
        let mut acc = HilbertSeries::zero(n);
        for (i, module) in self.modules.iter().enumerate() {
            let s = HilbertSeries::free_module(module);
            acc = if i % 2 == 0 { acc.add(&s) } else { acc.sub(&s) };
        }
        acc
    }

    pub fn composites_vanish(&self) -> bool {
        self.maps
            .windows(2)
            .all(|w| w[0].compose(&w[1]).is_zero())
    }
}

/// Remove invertible (degree-zero) entries from a presentation by column
/// operations followed by deleting the pivot row and column; the cokernel is
/// unchanged. Zero columns are dropped as well.
fn cancel_units(map: &GradedMap) -> GradedMap {
    let mut tgt_shifts = map.target.shifts.clone();
    let mut src_shifts = map.source.shifts.clone();
    let mut cols: Vec<FreeElement> = map.cols.clone();
    let n = map.target.n;
    let field = map.target.field;

    'outer: loop {
        for j in 0..cols.len() {
            for i in 0..tgt_shifts.len() {
                let e = &cols[j].comps[i];
                if !e.is_zero() && e.is_constant() {
                    let c = e.terms()[0].1.clone();
                    let cinv = c.inv();
                    // clear row i in the other columns
                    let pivot = cols[j].clone();
                    for (j2, col) in cols.iter_mut().enumerate() {
                        if j2 == j || col.comps[i].is_zero() {
                            continue;
                        }
                        let q = col.comps[i].scale(&cinv);
                        *col = col.sub(&pivot.mul_poly(&q));
                    }
                    // drop the pivot pair
                    cols.remove(j);
                    src_shifts.remove(j);
                    for col in &mut cols {
                        col.comps.remove(i);
                    }
                    tgt_shifts.remove(i);
                    continue 'outer;
                }
            }
        }
        break;
    }

    // drop zero columns
    let keep: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j].is_zero()).collect();
    let cols: Vec<FreeElement> = keep.iter().map(|&j| cols[j].clone()).collect();
    let src_shifts: Vec<i64> = keep.iter().map(|&j| src_shifts[j]).collect();

    GradedMap::new(
        FreeModule::new(n, field, src_shifts),
        FreeModule::new(n, field, tgt_shifts),
        cols,
    )
}

/// Prune presentation columns to a minimal generating set of the image.
fn prune_columns(map: &GradedMap) -> GradedMap {
    let minimal = minimal_generators(&map.target, ModuleOrder::plain(), &map.cols);
    let shifts: Vec<i64> = minimal
        .iter()
        .map(|v| v.degree(&map.target).unwrap())
        .collect();
    GradedMap::new(
        FreeModule::new(map.target.n, map.target.field, shifts),
        map.target.clone(),
        minimal,
    )
}

/// Minimal graded free resolution of coker(pres). Differentials beyond the
/// first come from pruned kernel generators, which keeps every map minimal
/// (no invertible entries), so the Betti numbers can be read off the shifts.
pub fn minimal_resolution(pres: &GradedMap) -> Resolution {
    let n = pres.target.n;
    let first = prune_columns(&cancel_units(pres));
    let mut modules = vec![first.target.clone(), first.source.clone()];
    let mut maps = vec![first];

    loop {
        let last = maps.last().unwrap();
        if last.cols.is_empty() {
            // previous module was free: the zero map ends the resolution
            modules.pop();
            maps.pop();
            break;
        }
        let ker = kernel(last);
        let gens = minimal_generators(&last.source, ModuleOrder::plain(), &ker.kernel_gens);
        if gens.is_empty() {
            break;
        }
        assert!(
            maps.len() <= n + 1,
            "resolution exceeds the global dimension bound — internal error"
        );
        let shifts: Vec<i64> = gens
            .iter()
            .map(|v| v.degree(&last.source).unwrap())
            .collect();
        debug_assert!(
            gens.iter()
                .flat_map(|v| &v.comps)
                .all(|p| p.is_zero() || !p.is_constant()),
            "non-minimal differential"
        );
        let next = GradedMap::new(
            FreeModule::new(n, pres.target.field, shifts),
            last.source.clone(),
            gens,
        );
        modules.push(next.source.clone());
        maps.push(next);
    }

    Resolution { modules, maps }
}

/// depth via Auslander–Buchsbaum: depth = n - pd for a finitely generated
/// graded module with finite projective dimension.
pub fn depth_and_pd(res: &Resolution) -> (usize, usize) {
    let pd = res.length();
    let n = res.modules[0].n;
    (n - pd, pd)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Shape {
    Free,
    BuchsbaumRim,
    NearlyFree,
    ThreeSyzygy,
    Other,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Shape::Free => "free",
            Shape::BuchsbaumRim => "buchsbaum-rim",
            Shape::NearlyFree => "nearly-free",
            Shape::ThreeSyzygy => "three-syzygy",
            Shape::Other => "other",
        };
        write!(f, "{s}")
    }
}

/// Classify the Betti table (absolute convention) of the cokernel of a
/// validated 2x4 presentation with row degrees d1 <= d2.
pub fn shape_match(betti: &BettiTable, d1: i64, d2: i64) -> Shape {
    let pd = betti.projective_dimension();
    if pd <= 2 {
        return Shape::Free;
    }
    if pd == 3 {
        let f2 = betti.degrees(2);
        let f3 = betti.degrees(3);
        let d = d1 + d2;
        let mut br_f3: BTreeMap<i64, usize> = BTreeMap::new();
        *br_f3.entry(2 * d1 + d2).or_insert(0) += 1;
        *br_f3.entry(d1 + 2 * d2).or_insert(0) += 1;
        if f2 == BTreeMap::from([(d, 4)]) && f3 == br_f3 {
            return Shape::BuchsbaumRim;
        }
        if betti.rank(3) == 1 && betti.rank(2) == 3 {
            let (&c, _) = f3.first_key_value().unwrap();
            if f2.get(&(c - 1)).copied().unwrap_or(0) >= 2 {
                return Shape::NearlyFree;
            }
            return Shape::ThreeSyzygy;
        }
    }
    Shape::Other
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::hilbert::hilbert_of_quotient;
    use crate::modgb::buchberger;
    use crate::parse::parse_poly;

    fn qq(src: &str, n: usize) -> crate::poly::Polynomial {
        parse_poly(src, n, FieldSpec::QQ).unwrap()
    }

    fn row_map(n: usize, entries: &[&str], shift_deg: i64) -> GradedMap {
        let field = FieldSpec::QQ;
        let cols: Vec<FreeElement> = entries
            .iter()
            .map(|s| FreeElement { comps: vec![qq(s, n)] })
            .collect();
        GradedMap::new(
            FreeModule::new(n, field, vec![shift_deg; entries.len()]),
            FreeModule::new(n, field, vec![0]),
            cols,
        )
    }

    #[test]
    fn koszul_resolution_of_the_maximal_ideal() {
        let pres = row_map(3, &["x1", "x2", "x3"], 1);
        let res = minimal_resolution(&pres);
        assert_eq!(res.length(), 3);
        let b = res.betti();
        assert_eq!(
            b.entries,
            BTreeMap::from([((0, 0), 1), ((1, 1), 3), ((2, 2), 3), ((3, 3), 1)])
        );
        assert!(res.composites_vanish());
        let (depth, pd) = depth_and_pd(&res);
        assert_eq!((depth, pd), (0, 3));

        // Euler characteristic equals the quotient series
        let module = FreeModule::new(3, FieldSpec::QQ, vec![0]);
        let gb = buchberger(
            &module,
            ModuleOrder::plain(),
            &pres.cols.iter().cloned().collect::<Vec<_>>(),
        );
        let hs = hilbert_of_quotient(&module, &gb);
        assert!(res.euler_series().series_eq(&hs));
    }

    #[test]
    fn unit_entries_cancel() {
        // [[1, x1], [0, x2]] presents R/(x2) (up to the split summand)
        let n = 2;
        let field = FieldSpec::QQ;
        let cols = vec![
            FreeElement { comps: vec![qq("1", n), qq("0", n)] },
            FreeElement { comps: vec![qq("x1", n), qq("x2", n)] },
        ];
        let pres = GradedMap::new(
            FreeModule::new(n, field, vec![0, 1]),
            FreeModule::new(n, field, vec![0, 0]),
            cols,
        );
        let res = minimal_resolution(&pres);
        let b = res.betti();
        assert_eq!(b.entries, BTreeMap::from([((0, 0), 1), ((1, 1), 1)]));
    }

    #[test]
    fn redundant_generators_are_pruned() {
        // (x1, x2, x1 + x2) presents the same module as (x1, x2)
        let pres = row_map(2, &["x1", "x2", "x1 + x2"], 1);
        let res = minimal_resolution(&pres);
        let b = res.betti();
        assert_eq!(
            b.entries,
            BTreeMap::from([((0, 0), 1), ((1, 1), 2), ((2, 2), 1)])
        );
    }

    #[test]
    fn complete_intersection_codim_two() {
        let field = FieldSpec::QQ;
        let cols = vec![
            FreeElement { comps: vec![qq("x1^2", 3)] },
            FreeElement { comps: vec![qq("x2^3", 3)] },
        ];
        let pres = GradedMap::new(
            FreeModule::new(3, field, vec![2, 3]),
            FreeModule::new(3, field, vec![0]),
            cols,
        );
        let res = minimal_resolution(&pres);
        let b = res.betti();
        assert_eq!(
            b.entries,
            BTreeMap::from([((0, 0), 1), ((1, 2), 1), ((1, 3), 1), ((2, 5), 1)])
        );
    }

    #[test]
    fn twisting_tables() {
        let t = BettiTable {
            entries: BTreeMap::from([((0, -1), 2), ((1, 0), 4)]),
        };
        let tw = t.twisted(1);
        assert_eq!(tw.entries, BTreeMap::from([((0, 0), 2), ((1, 1), 4)]));
    }

    #[test]
    fn shape_classification() {
        // Buchsbaum–Rim layout for d1 = d2 = 1
        let br = BettiTable {
            entries: BTreeMap::from([
                ((0, -1), 2),
                ((1, 0), 4),
                ((2, 2), 4),
                ((3, 3), 2),
            ]),
        };
        assert_eq!(shape_match(&br, 1, 1), Shape::BuchsbaumRim);

        let free = BettiTable {
            entries: BTreeMap::from([((0, -1), 2), ((1, 0), 4), ((2, 1), 2)]),
        };
        assert_eq!(shape_match(&free, 1, 1), Shape::Free);

        // nearly-free, codimension-2 flavor: F3 = R(-3), F2 = R(-2)^2 + R(-1)
        let nf = BettiTable {
            entries: BTreeMap::from([
                ((0, -1), 2),
                ((1, 0), 4),
                ((2, 1), 1),
                ((2, 2), 2),
                ((3, 3), 1),
            ]),
        };
        assert_eq!(shape_match(&nf, 1, 1), Shape::NearlyFree);

        // three-syzygy but not nearly-free
        let ts = BettiTable {
            entries: BTreeMap::from([
                ((0, -1), 2),
                ((1, 0), 4),
                ((2, 1), 1),
                ((2, 2), 1),
                ((2, 3), 1),
                ((3, 4), 1),
            ]),
        };
        assert_eq!(shape_match(&ts, 1, 1), Shape::ThreeSyzygy);
    }
}
