//! Buchberger's algorithm for submodules of graded free modules, with the
//! kernel of a graded map computed by eliminating the target block of the
//! graph module {(Av, v)}.

use crate::field::{FieldElement, FieldSpec};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

/// F = R(-shifts[0]) ⊕ ... ⊕ R(-shifts[r-1]); a generator e_i has degree
/// shifts[i], so a homogeneous element of internal degree t has component i
/// of polynomial degree t - shifts[i].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeModule {
    pub n: usize,
    pub field: FieldSpec,
    pub shifts: Vec<i64>,
}

impl FreeModule {
    pub fn new(n: usize, field: FieldSpec, shifts: Vec<i64>) -> FreeModule {
        FreeModule { n, field, shifts }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn zero_element(&self) -> FreeElement {
        FreeElement {
            comps: vec![Polynomial::zero(self.n, self.field); self.rank()],
        }
    }

    pub fn basis_element(&self, i: usize) -> FreeElement {
        let mut v = self.zero_element();
        v.comps[i] = Polynomial::one(self.n, self.field);
        v
    }

    /// Graded dimension of the free module itself at internal degree t.
    pub fn dim_at(&self, t: i64) -> u64 {
        self.shifts
            .iter()
            .map(|&a| crate::hilbert::monomial_count(self.n, t - a))
            .sum()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeElement {
    pub comps: Vec<Polynomial>,
}

impl FreeElement {
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        FreeElement {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        FreeElement {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> FreeElement {
        FreeElement {
            comps: self.comps.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> FreeElement {
        FreeElement {
            comps: self.comps.iter().map(|p| p.mul_term(m, c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> FreeElement {
        FreeElement {
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn mul_poly(&self, q: &Polynomial) -> FreeElement {
        FreeElement {
            comps: self.comps.iter().map(|p| p.mul(q)).collect(),
        }
    }

    /// Internal degree of a homogeneous element: deg(comps[i]) + shifts[i],
    /// which must agree across nonzero components. None for zero.
    pub fn degree(&self, module: &FreeModule) -> Option<i64> {
        let mut deg = None;
        for (i, p) in self.comps.iter().enumerate() {
            if let Some(d) = p.degree() {
                let t = d as i64 + module.shifts[i];
                match deg {
                    None => deg = Some(t),
                    Some(prev) => assert_eq!(prev, t, "element is not homogeneous"),
                }
            }
        }
        deg
    }

    pub fn is_homogeneous(&self, module: &FreeModule) -> bool {
        let mut deg = None;
        for (i, p) in self.comps.iter().enumerate() {
            if !p.is_homogeneous() {
                return false;
            }
            if let Some(d) = p.degree() {
                let t = d as i64 + module.shifts[i];
                match deg {
                    None => deg = Some(t),
                    Some(prev) if prev != t => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn monocomponent(&self) -> Option<usize> {
        let mut found = None;
        for (i, p) in self.comps.iter().enumerate() {
            if !p.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

/// Position-over-term order on module terms, shifted degree first; lower
/// component index wins ties. `elim_split = Some(r)` makes the first r
/// components a dominant block (used to read kernels off graph modules).
/// With an `Elim` monomial order the underlying order drives the comparison
/// directly so the elimination property is preserved.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ModuleOrder {
    pub mono: MonomialOrder,
    pub elim_split: Option<usize>,
}

impl ModuleOrder {
    pub fn plain() -> ModuleOrder {
        ModuleOrder { mono: MonomialOrder::DegRevLex, elim_split: None }
    }

    fn cmp_terms(
        &self,
        module: &FreeModule,
        a: (usize, &Monomial),
        b: (usize, &Monomial),
    ) -> Ordering {
        if let Some(split) = self.elim_split {
            match (a.0 < split, b.0 < split) {
                (true, false) => return Ordering::Greater,
                (false, true) => return Ordering::Less,
                _ => {}
            }
        }
        match self.mono {
            MonomialOrder::DegRevLex => {
                let da = a.1.degree() as i64 + module.shifts[a.0];
                let db = b.1.degree() as i64 + module.shifts[b.0];
                da.cmp(&db)
                    .then_with(|| b.0.cmp(&a.0)) // lower component index is larger
                    .then_with(|| self.mono.cmp(a.1, b.1))
            }
            MonomialOrder::Elim { .. } => {
                self.mono.cmp(a.1, b.1).then_with(|| b.0.cmp(&a.0))
            }
        }
    }
}

#[derive(Clone, Debug)]
struct LeadTerm {
    comp: usize,
    mono: Monomial,
    coeff: FieldElement,
}

fn leading_term(
    module: &FreeModule,
    order: &ModuleOrder,
    v: &FreeElement,
) -> Option<LeadTerm> {
    let mut best: Option<LeadTerm> = None;
    for (i, p) in v.comps.iter().enumerate() {
        if let Some((m, c)) = p.leading_term(order.mono) {
            let better = match &best {
                None => true,
                Some(cur) => {
                    order.cmp_terms(module, (i, m), (cur.comp, &cur.mono)) == Ordering::Greater
                }
            };
            if better {
                best = Some(LeadTerm { comp: i, mono: m.clone(), coeff: c.clone() });
            }
        }
    }
    best
}

/// A reduced, monic Groebner basis of a submodule.
#[derive(Clone, Debug)]
pub struct GBasis {
    pub module: FreeModule,
    pub order: ModuleOrder,
    pub elems: Vec<FreeElement>,
    lts: Vec<(usize, Monomial)>,
}

impl GBasis {
    pub fn leading_terms(&self) -> &[(usize, Monomial)] {
        &self.lts
    }

    pub fn is_zero_module(&self) -> bool {
        self.elems.is_empty()
    }

    /// Initial degree: smallest internal degree among basis elements; for a
    /// homogeneous submodule this is the least degree of a nonzero element.
    pub fn initial_degree(&self) -> Option<i64> {
        self.elems
            .iter()
            .filter_map(|v| v.degree(&self.module))
            .min()
    }

    pub fn contains(&self, v: &FreeElement) -> bool {
        normal_form(self, v).is_zero()
    }
}

/// Full normal form: every term of the result is reducible by no basis
/// leading term. Deterministic (first dividing basis element wins).
pub fn normal_form(gb: &GBasis, v: &FreeElement) -> FreeElement {
    reduce_full(&gb.module, &gb.order, v.clone(), &gb.elems, &gb.lts)
}

fn reduce_full(
    module: &FreeModule,
    order: &ModuleOrder,
    mut work: FreeElement,
    basis: &[FreeElement],
    lts: &[(usize, Monomial)],
) -> FreeElement {
    let mut remainder = module.zero_element();
    'outer: while let Some(lt) = leading_term(module, order, &work) {
        for (bi, (bc, bm)) in lts.iter().enumerate() {
            if *bc == lt.comp && bm.divides(&lt.mono) {
                let q = bm.quotient_into(&lt.mono);
                // basis elements are monic
                work = work.sub(&basis[bi].mul_term(&q, &lt.coeff));
                continue 'outer;
            }
        }
        // irreducible leading term: move it to the remainder
        let t = Polynomial::from_terms(
            module.n,
            module.field,
            [(lt.mono.clone(), lt.coeff.clone())],
        );
        remainder.comps[lt.comp] = remainder.comps[lt.comp].add(&t);
        work.comps[lt.comp] = work.comps[lt.comp].sub(&t);
    }
    remainder
}

/// Buchberger with the normal (lowest degree, then FIFO) selection strategy,
/// the chain criterion, and the product criterion restricted to pairs whose
/// elements live in a single component (where the classical proof applies).
pub fn buchberger(module: &FreeModule, order: ModuleOrder, gens: &[FreeElement]) -> GBasis {
    let mut basis: Vec<FreeElement> = Vec::new();
    let mut lts: Vec<LeadTerm> = Vec::new();
    // queue keys: (degree, newer index, older index) — degree then FIFO
    let mut queue: BTreeSet<(i64, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let insert = |v: FreeElement,
                      basis: &mut Vec<FreeElement>,
                      lts: &mut Vec<LeadTerm>,
                      queue: &mut BTreeSet<(i64, usize, usize)>,
                      pending: &mut HashSet<(usize, usize)>| {
        let lt = leading_term(module, &order, &v).expect("inserting zero element");
        let monic = v.scale(&lt.coeff.inv());
        let k = basis.len();
        for (i, other) in lts.iter().enumerate() {
            if other.comp == lt.comp {
                let l = other.mono.lcm(&lt.mono);
                let deg = l.degree() as i64 + module.shifts[lt.comp];
                queue.insert((deg, k, i));
                pending.insert((i, k));
            }
        }
        basis.push(monic);
        lts.push(LeadTerm { coeff: module.field.one(), ..lt });
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        // seed with the reduced generator set
        let cur_lts: Vec<(usize, Monomial)> =
            lts.iter().map(|l| (l.comp, l.mono.clone())).collect();
        let r = reduce_full(module, &order, g.clone(), &basis, &cur_lts);
        if !r.is_zero() {
            insert(r, &mut basis, &mut lts, &mut queue, &mut pending);
        }
    }

    while let Some(&(deg, j, i)) = queue.iter().next() {
        queue.remove(&(deg, j, i));
        pending.remove(&(i, j));

        let (li, lj) = (&lts[i], &lts[j]);
        debug_assert_eq!(li.comp, lj.comp);

        // product criterion, only when both elements are monocomponent
        if li.mono.gcd_is_one(&lj.mono)
            && basis[i].monocomponent() == Some(li.comp)
            && basis[j].monocomponent() == Some(lj.comp)
        {
            continue;
        }

        // chain criterion: some k with lt_k | lcm and both companion pairs
        // already handled
        let l = li.mono.lcm(&lj.mono);
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lts[k].comp == li.comp
                && lts[k].mono.divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chained {
            continue;
        }

        let ui = li.mono.quotient_into(&l);
        let uj = lj.mono.quotient_into(&l);
        let one = module.field.one();
        let s = basis[i]
            .mul_term(&ui, &one)
            .sub(&basis[j].mul_term(&uj, &one));
        let cur_lts: Vec<(usize, Monomial)> =
            lts.iter().map(|t| (t.comp, t.mono.clone())).collect();
        let r = reduce_full(module, &order, s, &basis, &cur_lts);
        if !r.is_zero() {
            insert(r, &mut basis, &mut lts, &mut queue, &mut pending);
        }
    }

    interreduce(module, order, basis)
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn interreduce(module: &FreeModule, order: ModuleOrder, basis: Vec<FreeElement>) -> GBasis {
    let mut with_lts: Vec<(FreeElement, LeadTerm)> = basis
        .into_iter()
        .map(|v| {
            let lt = leading_term(module, &order, &v).unwrap();
            (v, lt)
        })
        .collect();
    with_lts.sort_by(|(_, a), (_, b)| {
        order
            .cmp_terms(module, (a.comp, &a.mono), (b.comp, &b.mono))
            .then_with(|| a.comp.cmp(&b.comp))
    });

    // ascending scan: drop anything an earlier kept leading term divides
    let mut kept: Vec<FreeElement> = Vec::new();
    let mut kept_lts: Vec<(usize, Monomial)> = Vec::new();
    for (v, lt) in with_lts {
        let redundant = kept_lts
            .iter()
            .any(|(c, m)| *c == lt.comp && m.divides(&lt.mono));
        if !redundant {
            kept.push(v);
            kept_lts.push((lt.comp, lt.mono));
        }
    }

    // tail reduction to the unique reduced basis
    for _pass in 0..1000 {
        let mut changed = false;
        for i in 0..kept.len() {
            let others: Vec<FreeElement> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v.clone())
                .collect();
            let other_lts: Vec<(usize, Monomial)> = kept_lts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, t)| t.clone())
                .collect();
            let r = reduce_full(module, &order, kept[i].clone(), &others, &other_lts);
            if r != kept[i] {
                kept[i] = r;
                changed = true;
            }
        }
        if !changed {
            return GBasis { module: module.clone(), order, elems: kept, lts: kept_lts };
        }
    }
    panic!("interreduction failed to stabilize");
}

/// A graded map between free modules, stored column-wise: column j is the
/// image of the j-th source generator and must be homogeneous of internal
/// degree source.shifts[j].
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub source: FreeModule,
    pub target: FreeModule,
    pub cols: Vec<FreeElement>,
}

impl GradedMap {
    pub fn new(source: FreeModule, target: FreeModule, cols: Vec<FreeElement>) -> GradedMap {
        assert_eq!(cols.len(), source.rank(), "column count mismatch");
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.comps.len(), target.rank(), "column height mismatch");
            assert!(
                col.is_homogeneous(&target),
                "column {j} is not homogeneous"
            );
            if let Some(d) = col.degree(&target) {
                assert_eq!(
                    d, source.shifts[j],
                    "column {j} degree disagrees with the source shift"
                );
            }
        }
        GradedMap { source, target, cols }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.cols[j].comps[i]
    }

    pub fn apply(&self, v: &FreeElement) -> FreeElement {
        let mut out = self.target.zero_element();
        for (j, col) in self.cols.iter().enumerate() {
            if !v.comps[j].is_zero() {
                out = out.add(&col.mul_poly(&v.comps[j]));
            }
        }
        out
    }

    pub fn compose(&self, inner: &GradedMap) -> GradedMap {
        assert_eq!(inner.target.shifts, self.source.shifts, "composition mismatch");
        let cols = inner.cols.iter().map(|c| self.apply(c)).collect();
        GradedMap::new(inner.source.clone(), self.target.clone(), cols)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }
}

pub struct KernelResult {
    /// Generators of ker(map), a Groebner basis of it in the source module.
    pub kernel_gens: Vec<FreeElement>,
    /// Reduced Groebner basis of the image submodule of the target.
    pub image_gb: GBasis,
}

/// Kernel of a graded map: run Buchberger on {(col_j, e_j)} in target ⊕ source
/// with the target block eliminated; basis elements with vanishing target part
/// are exactly a Groebner basis of the kernel, and the target parts of the
/// rest form a Groebner basis of the image.
pub fn kernel(map: &GradedMap) -> KernelResult {
    let r = map.target.rank();
    let n = map.target.n;
    let field = map.target.field;
    let mut shifts = map.target.shifts.clone();
    shifts.extend_from_slice(&map.source.shifts);
    let graph = FreeModule::new(n, field, shifts);
    let order = ModuleOrder { mono: MonomialOrder::DegRevLex, elim_split: Some(r) };

    let gens: Vec<FreeElement> = map
        .cols
        .iter()
        .enumerate()
        .map(|(j, col)| {
            let mut comps = col.comps.clone();
            comps.extend(map.source.basis_element(j).comps);
            FreeElement { comps }
        })
        .collect();

    let gb = buchberger(&graph, order, &gens);

    let mut kernel_gens = Vec::new();
    let mut image_elems = Vec::new();
    let mut image_lts = Vec::new();
    for (v, (c, m)) in gb.elems.iter().zip(gb.leading_terms()) {
        let tgt_part = FreeElement { comps: v.comps[..r].to_vec() };
        let src_part = FreeElement { comps: v.comps[r..].to_vec() };
        if tgt_part.is_zero() {
            kernel_gens.push(src_part);
        } else {
            debug_assert!(*c < r);
            image_elems.push(tgt_part);
            image_lts.push((*c, m.clone()));
        }
    }

    let image_gb = GBasis {
        module: map.target.clone(),
        order: ModuleOrder::plain(),
        elems: image_elems,
        lts: image_lts,
    };
    KernelResult { kernel_gens, image_gb }
}

/// Prune a homogeneous generating set to a minimal one: walk by ascending
/// degree and keep what is not already generated.
pub fn minimal_generators(
    module: &FreeModule,
    order: ModuleOrder,
    gens: &[FreeElement],
) -> Vec<FreeElement> {
    let mut sorted: Vec<&FreeElement> = gens.iter().filter(|v| !v.is_zero()).collect();
    sorted.sort_by_key(|v| v.degree(module).unwrap());

    let mut kept: Vec<FreeElement> = Vec::new();
    let mut kept_gb: Option<GBasis> = None;
    for v in sorted {
        let keep = match &kept_gb {
            None => true,
            Some(gb) => !gb.contains(v),
        };
        if keep {
            kept.push(v.clone());
            kept_gb = Some(buchberger(module, order, &kept));
        }
    }
    kept
}

pub fn ideal_gb(n: usize, field: FieldSpec, gens: &[Polynomial]) -> GBasis {
    let module = FreeModule::new(n, field, vec![0]);
    let elems: Vec<FreeElement> = gens
        .iter()
        .map(|p| FreeElement { comps: vec![p.clone()] })
        .collect();
    buchberger(&module, ModuleOrder::plain(), &elems)
}

/// Intersection of two homogeneous ideals via the auxiliary variable
/// x_{n+1}: I ∩ J = (t·I + (1-t)·J) ∩ k[x1..xn], computed with a block
/// order eliminating t. Returns a minimal homogeneous generating set.
pub fn intersect_ideals(
    n: usize,
    field: FieldSpec,
    igens: &[Polynomial],
    jgens: &[Polynomial],
) -> Vec<Polynomial> {
    let m = n + 1;
    let t = Polynomial::var(m, n, field);
    let one_minus_t = Polynomial::one(m, field).sub(&t);
    let module = FreeModule::new(m, field, vec![0]);
    let order = ModuleOrder { mono: MonomialOrder::Elim { split: n }, elim_split: None };

    let mut gens: Vec<FreeElement> = Vec::new();
    for f in igens {
        gens.push(FreeElement { comps: vec![t.mul(&f.extended(m))] });
    }
    for g in jgens {
        gens.push(FreeElement { comps: vec![one_minus_t.mul(&g.extended(m))] });
    }

    let gb = buchberger(&module, order, &gens);

    let mut out: Vec<Polynomial> = Vec::new();
    for v in &gb.elems {
        let p = &v.comps[0];
        if p.terms().iter().all(|(mo, _)| mo.exp(n) == 0) {
            // the intersection is homogeneous, so homogeneous parts stay inside
            for part in p.truncated(n).homogeneous_components() {
                out.push(part);
            }
        }
    }

    let base = FreeModule::new(n, field, vec![0]);
    let wrapped: Vec<FreeElement> = out
        .into_iter()
        .map(|p| FreeElement { comps: vec![p] })
        .collect();
    let minimal = minimal_generators(&base, ModuleOrder::plain(), &wrapped);
    minimal.into_iter().map(|v| v.comps.into_iter().next().unwrap()).collect()
}
