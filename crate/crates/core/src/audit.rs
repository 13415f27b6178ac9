//! Exact posterior of the target index given what a coalition of nodes saw.
//! Every table is a count of private states consistent with the view, per
//! candidate target; uniformity is integer equality.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::linalg::{self, Solutions};
use crate::linspace::{LinSubspace, SubspaceCatalog};
use crate::protocol::{ClientState, Query, ResamplePolicy, Scheme, SchemeParams, Secret};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Observation {
    pub alpha: FieldElem,
    pub query: Query,
}

/// Queries seen by the nodes of a coalition, in coalition order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoalitionView {
    pub scheme: Scheme,
    pub observations: Vec<Observation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationJson {
    pub alpha: u32,
    pub query: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewJson {
    pub scheme: Scheme,
    pub observations: Vec<ObservationJson>,
}

impl CoalitionView {
    /// Extracts the coalition's part of a session's queries.
    pub fn observe(
        params: &SchemeParams,
        state: &ClientState,
        coalition: &[FieldElem],
    ) -> Result<Self> {
        let queries: BTreeMap<FieldElem, Query> = state.queries(params).into_iter().collect();
        let observations = coalition
            .iter()
            .map(|&alpha| {
                let query = queries.get(&alpha).cloned().ok_or_else(|| {
                    Error::MalformedView(format!("node {alpha} is not contacted in this session"))
                })?;
                Ok(Observation { alpha, query })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            scheme: params.scheme(),
            observations,
        })
    }

    pub fn coalition(&self) -> Vec<FieldElem> {
        self.observations.iter().map(|o| o.alpha).collect()
    }

    pub fn to_json(&self) -> ViewJson {
        ViewJson {
            scheme: self.scheme,
            observations: self
                .observations
                .iter()
                .map(|o| ObservationJson {
                    alpha: o.alpha.0,
                    query: o.query.elems().iter().map(|e| e.0).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(params: &SchemeParams, v: &ViewJson) -> Result<Self> {
        let f = params.field();
        if v.scheme != params.scheme() {
            return Err(Error::MalformedView(format!(
                "view is for {}, parameters for {}",
                v.scheme,
                params.scheme()
            )));
        }
        let observations = v
            .observations
            .iter()
            .map(|o| {
                let alpha = f.elem(o.alpha as u64)?;
                let elems = o
                    .query
                    .iter()
                    .map(|&e| f.elem(e as u64))
                    .collect::<Result<Vec<_>>>()?;
                let query = match v.scheme {
                    Scheme::Plain | Scheme::HiddenSubspace => Query::Traces(elems),
                    _ => match elems.as_slice() {
                        [k] => Query::Masked(*k),
                        _ => {
                            return Err(Error::MalformedView(
                                "masked queries carry one element".into(),
                            ))
                        }
                    },
                };
                Ok(Observation { alpha, query })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            scheme: v.scheme,
            observations,
        })
    }
}

/// Consistency counts per candidate target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosteriorTable {
    pub candidates: BTreeMap<u32, u64>,
    pub uniform: bool,
}

impl PosteriorTable {
    pub fn from_counts(candidates: BTreeMap<u32, u64>) -> Self {
        let mut vals = candidates.values();
        let uniform = match vals.next() {
            Some(&first) => first > 0 && vals.all(|&c| c == first),
            None => false,
        };
        Self {
            candidates,
            uniform,
        }
    }

    /// Candidates with a nonzero count.
    pub fn support(&self) -> Vec<u32> {
        self.candidates
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&b, _)| b)
            .collect()
    }

    /// `max / min` over admissible candidates; infinite when some count is zero.
    pub fn ratio(&self) -> f64 {
        let max = self.candidates.values().copied().max().unwrap_or(0);
        let min = self.candidates.values().copied().min().unwrap_or(0);
        if min == 0 {
            return f64::INFINITY;
        }
        max as f64 / min as f64
    }

    pub fn total(&self) -> u64 {
        self.candidates.values().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub scheme: Scheme,
    pub coalition: Vec<u32>,
    pub view: ViewJson,
    pub candidates: BTreeMap<u32, u64>,
    pub uniform: bool,
    /// Counts restricted to masks with `R(beta) != 0`, for masked schemes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditioned: Option<PosteriorTable>,
}

/// Audits a view with the method matching its scheme.
pub fn audit(params: &SchemeParams, view: &CoalitionView) -> Result<AuditReport> {
    let (ideal, conditioned) = match params.scheme() {
        Scheme::Plain => (audit_plain(params, view)?, None),
        Scheme::HiddenSubspace => (audit_hidden_subspace(params, view)?, None),
        Scheme::SecretSharing | Scheme::Retrieval => {
            let (a, b) = audit_masked(params, view)?;
            (a, Some(b))
        }
    };
    Ok(AuditReport {
        scheme: params.scheme(),
        coalition: view.coalition().iter().map(|a| a.0).collect(),
        view: view.to_json(),
        candidates: ideal.candidates,
        uniform: ideal.uniform,
        conditioned,
    })
}

fn check_view(params: &SchemeParams, view: &CoalitionView) -> Result<()> {
    if view.scheme != params.scheme() {
        return Err(Error::MalformedView("scheme mismatch".into()));
    }
    let mut seen = Vec::new();
    for o in &view.observations {
        if params.code().position(o.alpha).is_none() {
            return Err(Error::MalformedView(format!(
                "node {} is not part of the code",
                o.alpha
            )));
        }
        if seen.contains(&o.alpha) {
            return Err(Error::MalformedView(format!(
                "node {} listed twice",
                o.alpha
            )));
        }
        seen.push(o.alpha);
    }
    Ok(())
}

/// Candidate targets for a view: every point outside the coalition, or every
/// point for retrieval.
fn candidates(params: &SchemeParams, view: &CoalitionView) -> Vec<FieldElem> {
    let coalition = view.coalition();
    params
        .code()
        .alphas()
        .iter()
        .copied()
        .filter(|b| params.scheme() == Scheme::Retrieval || !coalition.contains(b))
        .collect()
}

/// Deterministic scheme: a candidate is consistent iff it yields the same queries.
pub fn audit_plain(params: &SchemeParams, view: &CoalitionView) -> Result<PosteriorTable> {
    check_view(params, view)?;
    let mut counts = BTreeMap::new();
    for beta in candidates(params, view) {
        let st = ClientState::with_secret(params, beta, Secret::None)?;
        let hit = CoalitionView::observe(params, &st, &view.coalition())? == *view;
        counts.insert(beta.0, hit as u64);
    }
    Ok(PosteriorTable::from_counts(counts))
}

/// Counts `(W, ordered basis of im L_W)` states per candidate. Each observer
/// pins the basis to `eta (alpha - beta') / lambda_alpha`; the state is
/// consistent iff all observers agree and the basis spans the image of some
/// subspace polynomial, which by injectivity of `W -> im(L_W)` is unique.
pub fn audit_hidden_subspace(
    params: &SchemeParams,
    view: &CoalitionView,
) -> Result<PosteriorTable> {
    check_view(params, view)?;
    let f = params.field();
    let catalog = params
        .catalog()
        .ok_or_else(|| Error::Internal("missing catalog".into()))?;
    let rlen = params.response_len();
    let mut etas = Vec::new();
    for o in &view.observations {
        let Query::Traces(eta) = &o.query else {
            return Err(Error::MalformedView("expected trace multipliers".into()));
        };
        if eta.len() != rlen {
            return Err(Error::MalformedView(format!(
                "query of length {}, expected {rlen}",
                eta.len()
            )));
        }
        let rows: Vec<_> = eta.iter().map(|&e| f.coords(e)).collect();
        if linalg::rank(f, &rows) != rlen {
            return Err(Error::MalformedView(format!(
                "query to node {} is not independent",
                o.alpha
            )));
        }
        let lambda = params.code().lambdas()[params.code().position(o.alpha).unwrap()];
        etas.push((o.alpha, lambda, eta.clone()));
    }
    let mut counts = BTreeMap::new();
    for beta in candidates(params, view) {
        let mut chi: Option<Vec<FieldElem>> = None;
        let mut agree = true;
        for (alpha, lambda, eta) in &etas {
            let s = f.div(f.sub(*alpha, beta), *lambda);
            let c: Vec<_> = eta.iter().map(|&e| f.mul(e, s)).collect();
            match &chi {
                None => chi = Some(c),
                Some(prev) => agree &= *prev == c,
            }
        }
        let count = match (agree, chi) {
            (true, Some(c)) => catalog.preimage(&LinSubspace::span(f, &c)).is_some() as u64,
            (true, None) => hidden_subspace_state_count(f, catalog),
            _ => 0,
        };
        counts.insert(beta.0, count);
    }
    Ok(PosteriorTable::from_counts(counts))
}

/// Number of `(W, ordered basis)` states: subspaces times `|GL(ell - m, q)|`.
pub fn hidden_subspace_state_count(f: &FieldCtx, catalog: &SubspaceCatalog) -> u64 {
    let r = (f.ell() - catalog.m()) as u32;
    let q = f.q();
    let gl: u64 = (0..r).map(|i| q.pow(r) - q.pow(i)).product();
    catalog.len() as u64 * gl
}

/// Brute force over every `(W, ordered basis)` state; independent of the
/// preimage argument used by [`audit_hidden_subspace`].
pub fn audit_hidden_subspace_exhaustive(
    params: &SchemeParams,
    view: &CoalitionView,
) -> Result<PosteriorTable> {
    check_view(params, view)?;
    let f = params.field();
    let catalog = params
        .catalog()
        .ok_or_else(|| Error::Internal("missing catalog".into()))?;
    let coalition = view.coalition();
    let mut counts = BTreeMap::new();
    for beta in candidates(params, view) {
        let mut count = 0;
        for entry in catalog.entries() {
            for chi in ordered_bases(f, &entry.image_span) {
                let secret = Secret::Subspace {
                    w: entry.subspace.clone(),
                    chi,
                };
                let st = ClientState::with_secret(params, beta, secret)?;
                if CoalitionView::observe(params, &st, &coalition)? == *view {
                    count += 1;
                }
            }
        }
        counts.insert(beta.0, count);
    }
    Ok(PosteriorTable::from_counts(counts))
}

/// All ordered bases of `v`.
pub fn ordered_bases(f: &FieldCtx, v: &LinSubspace) -> Vec<Vec<FieldElem>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    extend_bases(f, v, &mut cur, &mut out);
    out
}

fn extend_bases(
    f: &FieldCtx,
    v: &LinSubspace,
    cur: &mut Vec<FieldElem>,
    out: &mut Vec<Vec<FieldElem>>,
) {
    if cur.len() == v.dim() {
        out.push(cur.clone());
        return;
    }
    let span = LinSubspace::span(f, cur);
    for &x in v.members() {
        if !span.contains(x) {
            cur.push(x);
            extend_bases(f, v, cur, out);
            cur.pop();
        }
    }
}

/// Two nodes under hidden-subspace repair with `ell - m = 1`: the ratio of
/// the two one-element queries fixes the target.
pub fn ratio_attack(params: &SchemeParams, view: &CoalitionView) -> Result<FieldElem> {
    let f = params.field();
    let [a, b] = view.observations.as_slice() else {
        return Err(Error::MalformedView(
            "ratio attack needs exactly two observers".into(),
        ));
    };
    let (Query::Traces(ea), Query::Traces(eb)) = (&a.query, &b.query) else {
        return Err(Error::MalformedView("expected trace multipliers".into()));
    };
    if ea.len() != 1 || eb.len() != 1 {
        return Err(Error::MalformedView(
            "ratio attack needs one-element queries".into(),
        ));
    }
    let code = params.code();
    let la = code.lambdas()[code
        .position(a.alpha)
        .ok_or(Error::UnknownTarget(a.alpha.0))?];
    let lb = code.lambdas()[code
        .position(b.alpha)
        .ok_or(Error::UnknownTarget(b.alpha.0))?];
    // rho = (alpha_b - beta) / (alpha_a - beta)
    let rho = f.div(f.mul(ea[0], lb), f.mul(eb[0], la));
    let one_minus = f.sub(FieldElem::ONE, rho);
    if one_minus.is_zero() {
        return Err(Error::MalformedView(
            "queries are inconsistent with distinct nodes".into(),
        ));
    }
    Ok(f.div(f.sub(b.alpha, f.mul(rho, a.alpha)), one_minus))
}

/// Counts mask polynomials `R` of degree `< t` consistent with the view, per
/// candidate. Returns the unconditioned table and the table restricted to
/// `R(beta') != 0`.
pub fn audit_masked(
    params: &SchemeParams,
    view: &CoalitionView,
) -> Result<(PosteriorTable, PosteriorTable)> {
    check_view(params, view)?;
    let f = params.field();
    let t = params.t();
    let mut kappas = Vec::new();
    for o in &view.observations {
        let Query::Masked(k) = o.query else {
            return Err(Error::MalformedView(
                "expected a single mask element".into(),
            ));
        };
        kappas.push((o.alpha, k));
    }
    let mut ideal = BTreeMap::new();
    let mut cond = BTreeMap::new();
    for beta in candidates(params, view) {
        // sum_s R_s alpha^s = kappa (alpha - beta), or = kappa at the target itself
        let a: Vec<Vec<FieldElem>> = kappas
            .iter()
            .map(|&(alpha, _)| (0..t).map(|s| f.pow(alpha, s as u64)).collect())
            .collect();
        let rhs: Vec<FieldElem> = kappas
            .iter()
            .map(|&(alpha, k)| {
                if alpha == beta {
                    k
                } else {
                    f.mul(k, f.sub(alpha, beta))
                }
            })
            .collect();
        let sol = linalg::solve(f, &a, t, &rhs);
        let total = sol.count(f);
        ideal.insert(beta.0, total);
        cond.insert(beta.0, total - vanishing_count(f, &sol, beta, t));
    }
    Ok((
        PosteriorTable::from_counts(ideal),
        PosteriorTable::from_counts(cond),
    ))
}

/// Solutions `R` with `R(beta) = 0`.
fn vanishing_count(f: &FieldCtx, sol: &Solutions, beta: FieldElem, t: usize) -> u64 {
    let Solutions::Affine { particular, kernel } = sol else {
        return 0;
    };
    let powers: Vec<FieldElem> = (0..t).map(|s| f.pow(beta, s as u64)).collect();
    let at = |v: &[FieldElem]| f.sum(v.iter().zip(&powers).map(|(&c, &p)| f.mul(c, p)));
    let dim = kernel.len() as u32;
    if kernel.iter().any(|k| !at(k).is_zero()) {
        f.order().pow(dim - 1)
    } else if at(particular).is_zero() {
        f.order().pow(dim)
    } else {
        0
    }
}

/// Frequency of each coalition view over `seeds`, with the target fixed.
pub fn empirical_distribution(
    params: &SchemeParams,
    beta: FieldElem,
    coalition: &[FieldElem],
    seeds: std::ops::Range<u64>,
    policy: ResamplePolicy,
) -> Result<BTreeMap<Vec<Query>, u64>> {
    if seeds.is_empty() {
        return Err(Error::Infeasible("need at least one seed".into()));
    }
    let mut freq = BTreeMap::new();
    for seed in seeds {
        let st = ClientState::draw(params, beta, seed, policy)?;
        let view = CoalitionView::observe(params, &st, coalition)?;
        let key: Vec<Query> = view.observations.into_iter().map(|o| o.query).collect();
        *freq.entry(key).or_insert(0) += 1;
    }
    Ok(freq)
}

pub fn total_variation<K: Ord>(a: &BTreeMap<K, u64>, b: &BTreeMap<K, u64>) -> f64 {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    let pa = |k: &K| a.get(k).copied().unwrap_or(0) as f64 / na as f64;
    let pb = |k: &K| b.get(k).copied().unwrap_or(0) as f64 / nb as f64;
    let mut sum = 0.0;
    for k in a.keys() {
        sum += (pa(k) - pb(k)).abs();
    }
    for k in b.keys().filter(|k| !a.contains_key(*k)) {
        sum += pb(k);
    }
    sum / 2.0
}
