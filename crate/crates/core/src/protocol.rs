//! Trace-based repair and retrieval sessions, split into client query
//! generation, node responses and client recovery so that the simulator and
//! the auditor can sit in between.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Basis, FieldCtx, FieldElem};
use crate::linalg;
use crate::linspace::{self, ImageBasis, LinSubspace, LinearizedPoly, SubspaceCatalog};
use crate::poly::Poly;
use crate::rs::{CodeSpec, Codeword};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Fixed public subspace, no privacy.
    Plain,
    /// Random secret subspace per session; private against one node.
    HiddenSubspace,
    /// Fixed public subspace, parity checks masked by a random `R(x)` of degree `< t`.
    SecretSharing,
    /// Secret sharing that also queries the target node.
    Retrieval,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Plain => "plain",
            Scheme::HiddenSubspace => "hidden-subspace",
            Scheme::SecretSharing => "secret-sharing",
            Scheme::Retrieval => "retrieval",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Scheme::Plain),
            "hidden-subspace" => Ok(Scheme::HiddenSubspace),
            "secret-sharing" => Ok(Scheme::SecretSharing),
            "retrieval" => Ok(Scheme::Retrieval),
            other => Err(Error::Infeasible(format!("unknown scheme {other:?}"))),
        }
    }
}

/// What to do when the mask `R(x)` vanishes at the target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ResamplePolicy {
    /// Redraw `R` until `R(beta) != 0`; recovery always succeeds.
    #[default]
    Resample,
    /// Keep the first draw. Used to sample idealized views; recovery then
    /// fails with [`Error::MaskVanishes`] when `R(beta) = 0`.
    Unconditioned,
}

/// Public parameters shared by the client and all nodes.
#[derive(Clone, Debug)]
pub struct SchemeParams {
    scheme: Scheme,
    code: CodeSpec,
    m: usize,
    t: usize,
    basis: Basis,
    w: LinSubspace,
    poly: LinearizedPoly,
    chi: ImageBasis,
    catalog: Option<Arc<SubspaceCatalog>>,
}

impl SchemeParams {
    /// Uses the standard basis and `W = span(1, xi, ..., xi^(m-1))`.
    pub fn new(scheme: Scheme, code: CodeSpec, m: usize, t: usize) -> Result<Self> {
        let f = code.field().clone();
        let ell = f.ell();
        if m == 0 || m >= ell {
            return Err(Error::DimensionOutOfRange { m, ell });
        }
        check_feasible(scheme, code.n(), code.k(), f.q(), m, t)?;
        let w = LinSubspace::span(&f, &f.standard_basis().elems()[..m]);
        let poly = linspace::subspace_poly(&f, &w)?;
        let chi = linspace::image_basis(&f, &poly)?;
        let catalog = match scheme {
            Scheme::HiddenSubspace => Some(Arc::new(SubspaceCatalog::build(&f, m)?)),
            _ => None,
        };
        Ok(Self {
            scheme,
            code,
            m,
            t,
            basis: f.standard_basis().clone(),
            w,
            poly,
            chi,
            catalog,
        })
    }

    pub fn with_basis(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }

    /// Replaces the public subspace `W`.
    pub fn with_subspace(mut self, w: LinSubspace) -> Result<Self> {
        let f = self.field().clone();
        if w.dim() != self.m {
            return Err(Error::DimensionOutOfRange {
                m: w.dim(),
                ell: f.ell(),
            });
        }
        self.poly = linspace::subspace_poly(&f, &w)?;
        self.chi = linspace::image_basis(&f, &self.poly)?;
        self.w = w;
        Ok(self)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    pub fn field(&self) -> &FieldCtx {
        self.code.field()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn subspace(&self) -> &LinSubspace {
        &self.w
    }

    pub fn subspace_poly(&self) -> &LinearizedPoly {
        &self.poly
    }

    pub fn chi(&self) -> &ImageBasis {
        &self.chi
    }

    pub fn catalog(&self) -> Option<&SubspaceCatalog> {
        self.catalog.as_deref()
    }

    /// Sub-symbols returned by each contacted node.
    pub fn response_len(&self) -> usize {
        self.field().ell() - self.m
    }

    pub fn helper_count(&self) -> usize {
        match self.scheme {
            Scheme::Retrieval => self.code.n(),
            _ => self.code.n() - 1,
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.helper_count() * self.response_len()
    }

    /// What a node may see: field, public image basis, nothing about the target.
    pub fn node_context(&self) -> NodeContext {
        NodeContext {
            field: self.field().clone(),
            chi: self.chi.elems().to_vec(),
        }
    }

    /// The node storing symbol `pos` of `codeword`.
    pub fn storage_node(&self, codeword: &Codeword, pos: usize) -> StorageNode {
        StorageNode {
            alpha: self.code.alphas()[pos],
            lambda: self.code.lambdas()[pos],
            symbol: codeword.values()[pos],
        }
    }

    fn target_pos(&self, beta: FieldElem) -> Result<usize> {
        self.code.position(beta).ok_or(Error::UnknownTarget(beta.0))
    }
}

/// Checks the length/redundancy conditions for each scheme. `t = 0` means no
/// privacy and is only meaningful for [`Scheme::Plain`].
pub fn check_feasible(
    scheme: Scheme,
    n: usize,
    k: usize,
    q: u64,
    m: usize,
    t: usize,
) -> Result<()> {
    let qm = q.checked_pow(m as u32).unwrap_or(u64::MAX);
    let redundancy = (n - k) as u64;
    let need = match scheme {
        Scheme::Plain | Scheme::HiddenSubspace => {
            if scheme == Scheme::HiddenSubspace && t > 1 {
                return Err(Error::Infeasible(format!(
                    "hidden-subspace repair is only private against a single node, asked for t = {t}"
                )));
            }
            if scheme == Scheme::Plain && t > 0 {
                return Err(Error::Infeasible("plain repair has t = 0".into()));
            }
            qm
        }
        Scheme::SecretSharing | Scheme::Retrieval => {
            if t == 0 {
                return Err(Error::Infeasible(format!("{scheme} needs t >= 1")));
            }
            qm.saturating_add(t as u64 - 1)
        }
    };
    if need > redundancy {
        return Err(Error::Infeasible(match scheme {
            Scheme::Retrieval => format!(
                "need n >= q^m + k + t - 1 = {}, have n = {n}",
                need + k as u64
            ),
            _ => format!("need n - k >= {need}, have n - k = {redundancy}"),
        }));
    }
    Ok(())
}

/// A query payload as received by a node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Query {
    /// Multipliers `eta_h`; the node returns `Tr(eta_h f(alpha))` for each.
    Traces(Vec<FieldElem>),
    /// Single mask `kappa`; the node returns `Tr(kappa chi_h lambda f(alpha))`
    /// over the public `chi`.
    Masked(FieldElem),
}

impl Query {
    pub fn elems(&self) -> Vec<FieldElem> {
        match self {
            Query::Traces(v) => v.clone(),
            Query::Masked(k) => vec![*k],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Query::Traces(v) => v.len(),
            Query::Masked(_) => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Public data available to nodes.
#[derive(Clone, Debug)]
pub struct NodeContext {
    pub field: FieldCtx,
    pub chi: Vec<FieldElem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StorageNode {
    pub alpha: FieldElem,
    pub lambda: FieldElem,
    pub symbol: FieldElem,
}

impl StorageNode {
    pub fn respond(&self, ctx: &NodeContext, query: &Query) -> Vec<FieldElem> {
        let f = &ctx.field;
        match query {
            Query::Traces(eta) => eta
                .iter()
                .map(|&e| f.trace(f.mul(e, self.symbol)))
                .collect(),
            Query::Masked(kappa) => {
                let base = f.mul(f.mul(*kappa, self.lambda), self.symbol);
                ctx.chi.iter().map(|&c| f.trace(f.mul(c, base))).collect()
            }
        }
    }
}

/// Private randomness of one session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Secret {
    None,
    /// Secret subspace and the ordered basis of `im(L_W)` actually used.
    Subspace {
        w: LinSubspace,
        chi: Vec<FieldElem>,
    },
    /// Mask polynomial `R(x)`, coefficients `R_0..R_(t-1)`.
    Mask(Vec<FieldElem>),
}

#[derive(Clone, Debug)]
pub struct ClientState {
    scheme: Scheme,
    beta: FieldElem,
    seed: Option<u64>,
    secret: Secret,
    poly: LinearizedPoly,
    chi: ImageBasis,
}

impl ClientState {
    /// Draws fresh randomness from `seed`.
    pub fn draw(
        params: &SchemeParams,
        beta: FieldElem,
        seed: u64,
        policy: ResamplePolicy,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut st = Self::draw_with(params, beta, &mut rng, policy)?;
        st.seed = Some(seed);
        Ok(st)
    }

    pub fn draw_with<R: Rng + ?Sized>(
        params: &SchemeParams,
        beta: FieldElem,
        rng: &mut R,
        policy: ResamplePolicy,
    ) -> Result<Self> {
        params.target_pos(beta)?;
        let f = params.field();
        let secret = match params.scheme {
            Scheme::Plain => Secret::None,
            Scheme::HiddenSubspace => {
                let catalog = params
                    .catalog()
                    .ok_or_else(|| Error::Internal("missing catalog".into()))?;
                let entry = catalog.get(rng.gen_range(0..catalog.len()));
                let chi = random_ordered_basis(f, &entry.image_span, rng);
                Secret::Subspace {
                    w: entry.subspace.clone(),
                    chi,
                }
            }
            Scheme::SecretSharing | Scheme::Retrieval => loop {
                let coeffs: Vec<FieldElem> = (0..params.t)
                    .map(|_| FieldElem(rng.gen_range(0..f.order()) as u32))
                    .collect();
                let r = Poly::from_coeffs(coeffs.clone());
                if policy == ResamplePolicy::Unconditioned || !r.eval(f, beta).is_zero() {
                    break Secret::Mask(coeffs);
                }
            },
        };
        Self::with_secret(params, beta, secret)
    }

    /// A session with explicitly chosen randomness.
    pub fn with_secret(params: &SchemeParams, beta: FieldElem, secret: Secret) -> Result<Self> {
        params.target_pos(beta)?;
        let f = params.field();
        let (poly, chi) = match (&params.scheme, &secret) {
            (Scheme::Plain, Secret::None) => (params.poly.clone(), params.chi.clone()),
            (Scheme::HiddenSubspace, Secret::Subspace { w, chi }) => {
                if w.dim() != params.m {
                    return Err(Error::DimensionOutOfRange {
                        m: w.dim(),
                        ell: f.ell(),
                    });
                }
                let poly = linspace::subspace_poly(f, w)?;
                let basis = ImageBasis::new(f, chi.clone())?;
                if basis.len() != params.response_len()
                    || basis.span(f) != linspace::image_basis(f, &poly)?.span(f)
                {
                    return Err(Error::NotInImage(chi.first().map_or(0, |c| c.0)));
                }
                (poly, basis)
            }
            (Scheme::SecretSharing | Scheme::Retrieval, Secret::Mask(r)) => {
                if r.len() != params.t {
                    return Err(Error::WrongLength {
                        expected: params.t,
                        got: r.len(),
                    });
                }
                (params.poly.clone(), params.chi.clone())
            }
            _ => {
                return Err(Error::Infeasible(format!(
                    "secret does not match {} scheme",
                    params.scheme
                )))
            }
        };
        Ok(Self {
            scheme: params.scheme,
            beta,
            seed: None,
            secret,
            poly,
            chi,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn beta(&self) -> FieldElem {
        self.beta
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn secret(&self) -> &Secret {
        &self.secret
    }

    pub fn chi(&self) -> &ImageBasis {
        &self.chi
    }

    fn mask(&self) -> Option<Poly> {
        match &self.secret {
            Secret::Mask(r) => Some(Poly::from_coeffs(r.clone())),
            _ => None,
        }
    }

    /// `R(beta)`, or 1 when there is no mask.
    pub fn mask_at_target(&self, f: &FieldCtx) -> FieldElem {
        self.mask().map_or(FieldElem::ONE, |r| r.eval(f, self.beta))
    }

    /// Queries in code order, one per contacted node.
    pub fn queries(&self, params: &SchemeParams) -> Vec<(FieldElem, Query)> {
        let f = params.field();
        let code = params.code();
        let mask = self.mask();
        code.alphas()
            .iter()
            .zip(code.lambdas())
            .filter_map(|(&alpha, &lambda)| {
                if alpha == self.beta {
                    return match (&mask, self.scheme) {
                        (Some(r), Scheme::Retrieval) => {
                            Some((alpha, Query::Masked(r.eval(f, alpha))))
                        }
                        _ => None,
                    };
                }
                let inv = f.inv(f.sub(alpha, self.beta));
                let q = match &mask {
                    Some(r) => Query::Masked(f.mul(r.eval(f, alpha), inv)),
                    None => Query::Traces(
                        self.chi
                            .elems()
                            .iter()
                            .map(|&c| f.mul(f.mul(lambda, c), inv))
                            .collect(),
                    ),
                };
                Some((alpha, q))
            })
            .collect()
    }

    /// Recovers `f(beta)` from per-node responses keyed by evaluation point.
    pub fn recover(
        &self,
        params: &SchemeParams,
        responses: &BTreeMap<FieldElem, Vec<FieldElem>>,
    ) -> Result<FieldElem> {
        let f = params.field();
        let code = params.code();
        let rlen = params.response_len();
        let r_beta = self.mask_at_target(f);
        if r_beta.is_zero() {
            return Err(Error::MaskVanishes);
        }
        let ub = params.basis();
        let mut traces = vec![FieldElem::ZERO; f.ell()];
        for &alpha in code.alphas() {
            if alpha == self.beta {
                continue;
            }
            let resp = checked_response(f, responses, alpha, rlen)?;
            let d = f.sub(alpha, self.beta);
            for (i, &u) in ub.elems().iter().enumerate() {
                let sigma = self.chi.expand(f, self.poly.eval(f, f.mul(u, d)))?;
                let dot = f.sum(sigma.iter().zip(&resp).map(|(&s, &tau)| f.mul(s, tau)));
                traces[i] = f.sub(traces[i], dot);
            }
        }
        // traces[i] = Tr(u_i * l0 * lambda_beta * R(beta) * f(beta))
        let y = ub.reconstruct(f, &traces);
        let lambda_beta = code.lambdas()[params.target_pos(self.beta)?];
        let scale = f.mul(f.mul(self.poly.l0(), lambda_beta), r_beta);
        let value = f.div(y, scale);
        if self.scheme == Scheme::Retrieval {
            let own = checked_response(f, responses, self.beta, rlen)?;
            // the target node returned Tr(chi_h * y / l0)
            let base = f.div(y, self.poly.l0());
            let expect: Vec<_> = self
                .chi
                .elems()
                .iter()
                .map(|&c| f.trace(f.mul(c, base)))
                .collect();
            if own != expect {
                return Err(Error::MalformedResponse(format!(
                    "target node {} disagrees with the helper reconstruction",
                    self.beta
                )));
            }
        }
        Ok(value)
    }
}

fn checked_response(
    f: &FieldCtx,
    responses: &BTreeMap<FieldElem, Vec<FieldElem>>,
    alpha: FieldElem,
    rlen: usize,
) -> Result<Vec<FieldElem>> {
    let resp = responses
        .get(&alpha)
        .ok_or(Error::MissingResponse(alpha.0))?;
    if resp.len() != rlen {
        return Err(Error::MalformedResponse(format!(
            "node {alpha} sent {} sub-symbols, expected {rlen}",
            resp.len()
        )));
    }
    if let Some(bad) = resp.iter().find(|&&x| !f.is_in_subfield(x)) {
        return Err(Error::MalformedResponse(format!(
            "node {alpha} sent {bad}, not in the subfield"
        )));
    }
    Ok(resp.clone())
}

/// Uniformly random ordered basis of the subspace `v`.
pub fn random_ordered_basis<R: Rng + ?Sized>(
    f: &FieldCtx,
    v: &LinSubspace,
    rng: &mut R,
) -> Vec<FieldElem> {
    let members = v.members();
    let mut out: Vec<FieldElem> = Vec::with_capacity(v.dim());
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    while out.len() < v.dim() {
        let x = members[rng.gen_range(0..members.len())];
        rows.push(f.coords(x));
        if linalg::rank(f, &rows) == rows.len() {
            out.push(x);
        } else {
            rows.pop();
        }
    }
    out
}

/// The parity-check polynomials `r_i(x) = L_W(u_i(x - beta)) / (x - beta) * R(x)`
/// behind a session.
pub fn parity_polys(params: &SchemeParams, state: &ClientState) -> Vec<Poly> {
    let f = params.field();
    let q = f.q();
    let mask = state
        .mask()
        .unwrap_or_else(|| Poly::constant(FieldElem::ONE));
    let shift = Poly::linear_root(f, state.beta);
    params
        .basis()
        .elems()
        .iter()
        .map(|&u| {
            // L_W(u (x - b)) / (x - b) = sum_j l_j u^(q^j) (x - b)^(q^j - 1)
            let mut acc = Poly::zero();
            let mut exp = 1u64;
            for &l in state.poly.coeffs() {
                let mut term = Poly::constant(f.mul(l, f.pow(u, exp)));
                for _ in 1..exp {
                    term = term.mul(f, &shift);
                }
                acc = acc.add(f, &term);
                exp *= q;
            }
            acc.mul(f, &mask)
        })
        .collect()
}

/// One completed session.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairTranscript {
    pub scheme: Scheme,
    pub seed: Option<u64>,
    pub beta: u32,
    pub nodes: Vec<NodeExchange>,
    pub recovered: u32,
    pub bandwidth_down_subsymbols: usize,
    pub bandwidth_up_symbols: usize,
}

/// Query as element indices, response as sub-symbol indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeExchange {
    pub alpha: u32,
    pub query: Vec<u32>,
    pub response: Vec<u32>,
}

impl RepairTranscript {
    pub fn new(
        f: &FieldCtx,
        state: &ClientState,
        exchanges: &[(FieldElem, Query, Vec<FieldElem>)],
        recovered: FieldElem,
    ) -> Self {
        let nodes: Vec<NodeExchange> = exchanges
            .iter()
            .map(|(alpha, q, resp)| NodeExchange {
                alpha: alpha.0,
                query: q.elems().iter().map(|e| e.0).collect(),
                response: resp
                    .iter()
                    .map(|&x| f.subfield_index(x).unwrap_or(u32::MAX))
                    .collect(),
            })
            .collect();
        Self {
            scheme: state.scheme,
            seed: state.seed,
            beta: state.beta.0,
            bandwidth_down_subsymbols: nodes.iter().map(|n| n.response.len()).sum(),
            bandwidth_up_symbols: nodes.iter().map(|n| n.query.len()).sum(),
            nodes,
            recovered: recovered.0,
        }
    }
}

/// Runs one session end to end against in-memory nodes.
pub fn run_session(
    params: &SchemeParams,
    codeword: &Codeword,
    state: &ClientState,
) -> Result<RepairTranscript> {
    let f = params.field();
    let ctx = params.node_context();
    let mut exchanges = Vec::new();
    let mut responses = BTreeMap::new();
    for (alpha, q) in state.queries(params) {
        let pos = params.target_pos(alpha)?;
        let resp = params.storage_node(codeword, pos).respond(&ctx, &q);
        responses.insert(alpha, resp.clone());
        exchanges.push((alpha, q, resp));
    }
    let value = state.recover(params, &responses)?;
    Ok(RepairTranscript::new(f, state, &exchanges, value))
}

/// Draws randomness from `seed` and runs a session.
pub fn repair(
    params: &SchemeParams,
    codeword: &Codeword,
    beta: FieldElem,
    seed: u64,
) -> Result<RepairTranscript> {
    let state = ClientState::draw(params, beta, seed, ResamplePolicy::Resample)?;
    run_session(params, codeword, &state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldConfig;

    fn gf8_params(scheme: Scheme, k: usize, t: usize) -> SchemeParams {
        let code = CodeSpec::full_length(FieldConfig::gf8().build().unwrap(), k).unwrap();
        SchemeParams::new(scheme, code, 1, t).unwrap()
    }

    #[test]
    fn feasibility_rules() {
        assert!(check_feasible(Scheme::Plain, 4, 2, 2, 1, 0).is_ok());
        assert!(check_feasible(Scheme::Plain, 4, 3, 2, 1, 0).is_err());
        assert!(check_feasible(Scheme::HiddenSubspace, 8, 5, 2, 1, 2).is_err());
        assert!(check_feasible(Scheme::SecretSharing, 8, 5, 2, 1, 2).is_ok());
        assert!(check_feasible(Scheme::SecretSharing, 8, 5, 2, 1, 3).is_err());
        assert!(check_feasible(Scheme::SecretSharing, 8, 5, 2, 1, 0).is_err());
        assert!(check_feasible(Scheme::Retrieval, 8, 5, 2, 1, 2).is_ok());
        assert!(check_feasible(Scheme::Retrieval, 8, 6, 2, 1, 2).is_err());
    }

    #[test]
    fn public_subspace_default() {
        let p = gf8_params(Scheme::SecretSharing, 5, 2);
        assert_eq!(p.subspace().members(), &[FieldElem(0), FieldElem(1)]);
        assert_eq!(p.chi().elems(), &[FieldElem(3), FieldElem(6)]);
        assert_eq!(p.bandwidth(), 14);
    }

    #[test]
    fn gf8_masked_queries() {
        let p = gf8_params(Scheme::SecretSharing, 5, 2);
        let st = ClientState::with_secret(
            &p,
            FieldElem(6),
            Secret::Mask(vec![FieldElem(3), FieldElem(4)]),
        )
        .unwrap();
        let q = st.queries(&p);
        assert_eq!(q.len(), 7);
        assert_eq!(q[0], (FieldElem(0), Query::Masked(FieldElem(6))));
        assert_eq!(q[1], (FieldElem(1), Query::Masked(FieldElem(1))));
    }

    #[test]
    fn all_schemes_recover_on_gf8() {
        let code = CodeSpec::full_length(FieldConfig::gf8().build().unwrap(), 5).unwrap();
        let f = code.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (scheme, t) in [
            (Scheme::Plain, 0),
            (Scheme::HiddenSubspace, 1),
            (Scheme::SecretSharing, 2),
            (Scheme::Retrieval, 2),
        ] {
            let p = SchemeParams::new(scheme, code.clone(), 1, t).unwrap();
            for seed in 0..20 {
                let cw = code.encode_poly(Poly::random(&f, 5, &mut rng));
                for beta in f.elements() {
                    let tr = repair(&p, &cw, beta, seed).unwrap();
                    assert_eq!(FieldElem(tr.recovered), cw.poly().unwrap().eval(&f, beta));
                    assert_eq!(tr.bandwidth_down_subsymbols, p.bandwidth());
                }
            }
        }
    }

    #[test]
    fn vanishing_mask_is_reported() {
        let p = gf8_params(Scheme::SecretSharing, 5, 2);
        // R(x) = x - 6 vanishes at the target
        let st = ClientState::with_secret(
            &p,
            FieldElem(6),
            Secret::Mask(vec![FieldElem(6), FieldElem(1)]),
        )
        .unwrap();
        let cw = p.code().encode(&[FieldElem(1); 5]).unwrap();
        assert!(matches!(
            run_session(&p, &cw, &st),
            Err(Error::MaskVanishes)
        ));
    }

    #[test]
    fn missing_and_malformed_responses() {
        let p = gf8_params(Scheme::Plain, 5, 0);
        let st = ClientState::with_secret(&p, FieldElem(2), Secret::None).unwrap();
        let mut resp = BTreeMap::new();
        assert!(matches!(
            st.recover(&p, &resp),
            Err(Error::MissingResponse(0))
        ));
        for a in 0..8 {
            resp.insert(FieldElem(a), vec![FieldElem::ZERO]);
        }
        assert!(matches!(
            st.recover(&p, &resp),
            Err(Error::MalformedResponse(_))
        ));
        for a in 0..8 {
            resp.insert(FieldElem(a), vec![FieldElem::ZERO, FieldElem(5)]);
        }
        assert!(matches!(
            st.recover(&p, &resp),
            Err(Error::MalformedResponse(_))
        ));
    }

    #[test]
    fn unknown_target() {
        let code = CodeSpec::first_n(FieldConfig::gf8().build().unwrap(), 6, 3).unwrap();
        let p = SchemeParams::new(Scheme::Plain, code, 1, 0).unwrap();
        assert!(matches!(
            ClientState::draw(&p, FieldElem(7), 0, ResamplePolicy::Resample),
            Err(Error::UnknownTarget(7))
        ));
    }
}
