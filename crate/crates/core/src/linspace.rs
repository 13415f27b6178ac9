//! `B`-subspaces of `F`, their subspace polynomials and image bases.
//!
//! A subspace is identified by the reduced row echelon form of its generator
//! coordinates over the standard basis; enumeration order is lexicographic on
//! that form.

use std::collections::HashMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Basis, FieldCtx, FieldElem};
use crate::linalg;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinSubspace {
    /// RREF generator rows, coordinates in `B`.
    generators: Vec<Vec<FieldElem>>,
    /// All `q^m` members, sorted by index.
    members: Vec<FieldElem>,
}

impl Serialize for LinSubspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

fn all_combinations(ctx: &FieldCtx, gens: &[FieldElem]) -> Vec<FieldElem> {
    let mut out = vec![FieldElem::ZERO];
    for &g in gens {
        let mut next = Vec::with_capacity(out.len() * ctx.q() as usize);
        for &b in ctx.subfield() {
            let scaled = ctx.mul(b, g);
            next.extend(out.iter().map(|&x| ctx.add(x, scaled)));
        }
        out = next;
    }
    out.sort();
    out
}

impl LinSubspace {
    fn from_rref(ctx: &FieldCtx, generators: Vec<Vec<FieldElem>>) -> Self {
        let gens: Vec<FieldElem> = generators.iter().map(|c| ctx.from_coords(c)).collect();
        let members = all_combinations(ctx, &gens);
        Self {
            generators,
            members,
        }
    }

    /// The `B`-span of `elems`.
    pub fn span(ctx: &FieldCtx, elems: &[FieldElem]) -> Self {
        let mut rows: Vec<Vec<FieldElem>> = elems.iter().map(|&e| ctx.coords(e)).collect();
        linalg::rref(ctx, &mut rows);
        Self::from_rref(ctx, rows)
    }

    /// Parses an explicit member list, rejecting sets that are not subspaces.
    pub fn from_members(ctx: &FieldCtx, members: &[FieldElem]) -> Result<Self> {
        let s = Self::span(ctx, members);
        let mut given = members.to_vec();
        given.sort();
        given.dedup();
        if given != s.members {
            return Err(Error::NotASubspace(format!(
                "{} elements given, their span has {}",
                given.len(),
                s.members.len()
            )));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn members(&self) -> &[FieldElem] {
        &self.members
    }

    pub fn contains(&self, x: FieldElem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Canonical generator rows (coordinates over the standard basis).
    pub fn generator_rows(&self) -> &[Vec<FieldElem>] {
        &self.generators
    }

    pub fn generators(&self, ctx: &FieldCtx) -> Vec<FieldElem> {
        self.generators.iter().map(|c| ctx.from_coords(c)).collect()
    }
}

/// Number of `m`-dimensional subspaces of `GF(q)^ell`.
pub fn gaussian_binomial(ell: usize, m: usize, q: u64) -> u64 {
    if m > ell {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..m {
        num *= q.pow((ell - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn check_dim(ctx: &FieldCtx, m: usize) -> Result<()> {
    if m == 0 || m >= ctx.ell() {
        return Err(Error::DimensionOutOfRange { m, ell: ctx.ell() });
    }
    Ok(())
}

/// Every `m`-dimensional `B`-subspace of `F`, each exactly once, in canonical order.
pub fn enumerate_subspaces(ctx: &FieldCtx, m: usize) -> Result<Vec<LinSubspace>> {
    check_dim(ctx, m)?;
    let ell = ctx.ell();
    let sub = ctx.subfield();
    let mut out = Vec::new();
    for pivots in combinations(ell, m) {
        let free: Vec<(usize, usize)> = (0..m)
            .flat_map(|r| {
                let pv = &pivots;
                ((pv[r] + 1)..ell)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut rows = vec![vec![FieldElem::ZERO; ell]; m];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = FieldElem::ONE;
            }
            for (&(r, c), &d) in free.iter().zip(&digits) {
                rows[r][c] = sub[d];
            }
            out.push(LinSubspace::from_rref(ctx, rows));
            // odometer over the free entries
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < sub.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
    out.sort();
    let expected = gaussian_binomial(ell, m, ctx.q());
    if out.len() as u64 != expected {
        return Err(Error::Internal(format!(
            "enumerated {} subspaces, expected {expected}",
            out.len()
        )));
    }
    Ok(out)
}

/// `L(x) = sum_j l_j x^(q^j)`, monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPoly {
    coeffs: Vec<FieldElem>,
}

impl Serialize for LinearizedPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl LinearizedPoly {
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Dimension of the kernel, i.e. the `q`-degree.
    pub fn q_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x`.
    pub fn l0(&self) -> FieldElem {
        self.coeffs[0]
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        let mut y = x;
        for &c in &self.coeffs {
            acc = ctx.add(acc, ctx.mul(c, y));
            y = ctx.frobenius(y);
        }
        acc
    }
}

/// The subspace polynomial `prod_{w in W} (x - w)`, collapsed into `q`-power form.
pub fn subspace_poly(ctx: &FieldCtx, w: &LinSubspace) -> Result<LinearizedPoly> {
    let mut prod = Poly::constant(FieldElem::ONE);
    for &root in w.members() {
        prod = prod.mul(ctx, &Poly::linear_root(ctx, root));
    }
    let q = ctx.q() as usize;
    let mut coeffs = Vec::with_capacity(w.dim() + 1);
    let mut qpow = 1usize;
    for (e, &c) in prod.coeffs().iter().enumerate() {
        if e == qpow {
            coeffs.push(c);
            qpow *= q;
        } else if !c.is_zero() {
            return Err(Error::Internal(format!(
                "subspace product has a term of degree {e}"
            )));
        }
    }
    if coeffs.len() != w.dim() + 1 || coeffs.last() != Some(&FieldElem::ONE) {
        return Err(Error::Internal(
            "subspace product is not a monic q-polynomial".into(),
        ));
    }
    Ok(LinearizedPoly { coeffs })
}

/// A `B`-basis `(chi_1, ..., chi_r)` of a subspace, completed to a full basis
/// of `F` so that expansions come from traces against the dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageBasis {
    chi: Vec<FieldElem>,
    completed: Basis,
}

impl ImageBasis {
    pub fn new(ctx: &FieldCtx, chi: Vec<FieldElem>) -> Result<Self> {
        let rows: Vec<Vec<FieldElem>> = chi.iter().map(|&c| ctx.coords(c)).collect();
        if linalg::rank(ctx, &rows) != chi.len() {
            return Err(Error::NotABasis);
        }
        let mut full = chi.clone();
        let mut span_rows = rows;
        for &u in ctx.standard_basis().elems() {
            if full.len() == ctx.ell() {
                break;
            }
            span_rows.push(ctx.coords(u));
            if linalg::rank(ctx, &span_rows) == span_rows.len() {
                full.push(u);
            } else {
                span_rows.pop();
            }
        }
        let completed = Basis::new(ctx, full)?;
        Ok(Self { chi, completed })
    }

    pub fn elems(&self) -> &[FieldElem] {
        &self.chi
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    /// Unique `sigma` with `y = sum_h sigma_h chi_h`.
    pub fn expand(&self, ctx: &FieldCtx, y: FieldElem) -> Result<Vec<FieldElem>> {
        let mut c = self.completed.coords(ctx, y);
        if c[self.chi.len()..].iter().any(|x| !x.is_zero()) {
            return Err(Error::NotInImage(y.0));
        }
        c.truncate(self.chi.len());
        Ok(c)
    }

    pub fn span(&self, ctx: &FieldCtx) -> LinSubspace {
        LinSubspace::span(ctx, &self.chi)
    }
}

/// Basis of `im(L)`: images of the standard basis, keeping each one that is
/// independent of those kept so far, then sorted by element index.
pub fn image_basis(ctx: &FieldCtx, l: &LinearizedPoly) -> Result<ImageBasis> {
    let mut chosen = Vec::new();
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for &u in ctx.standard_basis().elems() {
        let y = l.eval(ctx, u);
        rows.push(ctx.coords(y));
        if linalg::rank(ctx, &rows) == rows.len() {
            chosen.push(y);
        } else {
            rows.pop();
        }
    }
    chosen.sort();
    if chosen.len() + l.q_degree() != ctx.ell() {
        return Err(Error::Internal(format!(
            "image has dimension {}, kernel dimension {}",
            chosen.len(),
            l.q_degree()
        )));
    }
    ImageBasis::new(ctx, chosen)
}

pub fn expand_in_image(ctx: &FieldCtx, chi: &ImageBasis, y: FieldElem) -> Result<Vec<FieldElem>> {
    chi.expand(ctx, y)
}

/// The unique `m`-dimensional `W` with `im(L_W) = V`, by exhaustive search.
pub fn preimage_subspace(ctx: &FieldCtx, v: &LinSubspace) -> Result<LinSubspace> {
    let m = ctx.ell().saturating_sub(v.dim());
    let mut found = Vec::new();
    for w in enumerate_subspaces(ctx, m)? {
        let l = subspace_poly(ctx, &w)?;
        if image_basis(ctx, &l)?.span(ctx) == *v {
            found.push(w);
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        k => Err(Error::Internal(format!(
            "{k} subspaces map onto the given image"
        ))),
    }
}

/// Precomputed `m`-subspaces with their subspace polynomials and images, for
/// repeated preimage lookups and uniform sampling.
#[derive(Clone, Debug)]
pub struct SubspaceCatalog {
    m: usize,
    entries: Vec<CatalogEntry>,
    by_image: HashMap<LinSubspace, usize>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub subspace: LinSubspace,
    pub poly: LinearizedPoly,
    pub image: ImageBasis,
    pub image_span: LinSubspace,
}

impl SubspaceCatalog {
    pub fn build(ctx: &FieldCtx, m: usize) -> Result<Self> {
        let mut entries = Vec::new();
        let mut by_image = HashMap::new();
        for subspace in enumerate_subspaces(ctx, m)? {
            let poly = subspace_poly(ctx, &subspace)?;
            let image = image_basis(ctx, &poly)?;
            let image_span = image.span(ctx);
            if by_image.insert(image_span.clone(), entries.len()).is_some() {
                return Err(Error::Internal(
                    "two subspaces share the same subspace-polynomial image".into(),
                ));
            }
            entries.push(CatalogEntry {
                subspace,
                poly,
                image,
                image_span,
            });
        }
        Ok(Self {
            m,
            entries,
            by_image,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &CatalogEntry {
        &self.entries[i]
    }

    /// Index of the subspace whose polynomial has image `v`.
    pub fn preimage(&self, v: &LinSubspace) -> Option<usize> {
        self.by_image.get(v).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldConfig;

    fn gf8() -> FieldCtx {
        FieldConfig::gf8().build().unwrap()
    }

    #[test]
    fn subspace_counts() {
        let f4 = FieldConfig::gf4().build().unwrap();
        let subs = enumerate_subspaces(&f4, 1).unwrap();
        let members: Vec<Vec<u32>> = subs
            .iter()
            .map(|s| s.members().iter().map(|e| e.0).collect())
            .collect();
        let mut sorted = members.clone();
        sorted.sort();
        assert_eq!(sorted, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert_eq!(enumerate_subspaces(&gf8(), 1).unwrap().len(), 7);
        let f16 = FieldConfig::gf16().build().unwrap();
        assert_eq!(enumerate_subspaces(&f16, 2).unwrap().len(), 35);
        assert!(matches!(
            enumerate_subspaces(&f16, 4),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(3, 1, 2), 7);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(2, 1, 4), 5);
        assert_eq!(gaussian_binomial(8, 4, 2), 200_787);
    }

    #[test]
    fn gf8_span_one_polynomial() {
        let f = gf8();
        let w = LinSubspace::span(&f, &[FieldElem::ONE]);
        let l = subspace_poly(&f, &w).unwrap();
        assert_eq!(l.coeffs(), &[FieldElem::ONE, FieldElem::ONE]);
        assert_eq!(l.l0(), FieldElem::ONE);
        let chi = image_basis(&f, &l).unwrap();
        // 1 + xi = 3, xi + xi^2 = 6
        assert_eq!(chi.elems(), &[FieldElem(3), FieldElem(6)]);
        let image: Vec<u32> = chi.span(&f).members().iter().map(|e| e.0).collect();
        assert_eq!(image, vec![0, 3, 5, 6]);
        // 1 + xi^2 = chi_1 + chi_2
        assert_eq!(
            chi.expand(&f, FieldElem(5)).unwrap(),
            vec![FieldElem(1), FieldElem(1)]
        );
        assert_eq!(
            chi.expand(&f, FieldElem(3)).unwrap(),
            vec![FieldElem(1), FieldElem(0)]
        );
        assert_eq!(
            chi.expand(&f, FieldElem(0)).unwrap(),
            vec![FieldElem(0), FieldElem(0)]
        );
        assert!(matches!(
            chi.expand(&f, FieldElem(1)),
            Err(Error::NotInImage(1))
        ));
    }

    #[test]
    fn gf8_span_xi_polynomial_by_expansion() {
        // (x)(x - xi) = x^2 + xi x over GF(2^3)
        let f = gf8();
        let w = LinSubspace::span(&f, &[f.xi()]);
        let l = subspace_poly(&f, &w).unwrap();
        assert_eq!(l.coeffs(), &[f.xi(), FieldElem::ONE]);
        for x in f.elements() {
            let zero = l.eval(&f, x).is_zero();
            assert_eq!(zero, w.contains(x));
        }
    }

    #[test]
    fn gf4_image_of_x2_plus_x() {
        let f = FieldConfig::gf4().build().unwrap();
        let w = LinSubspace::span(&f, &[FieldElem::ONE]);
        let l = subspace_poly(&f, &w).unwrap();
        let image: std::collections::BTreeSet<u32> =
            f.elements().map(|x| l.eval(&f, x).0).collect();
        assert_eq!(image.into_iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn preimage_of_example_image() {
        let f = gf8();
        let v = LinSubspace::span(&f, &[FieldElem(3), FieldElem(6)]);
        let w = preimage_subspace(&f, &v).unwrap();
        assert_eq!(w.members(), &[FieldElem(0), FieldElem(1)]);
    }

    #[test]
    fn from_members_rejects_non_subspace() {
        let f = gf8();
        assert!(
            LinSubspace::from_members(&f, &[FieldElem(0), FieldElem(1), FieldElem(2)]).is_err()
        );
        let s = LinSubspace::from_members(&f, &[FieldElem(1), FieldElem(0)]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0,1]");
    }
}
