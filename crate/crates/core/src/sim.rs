//! In-process storage cluster: nodes exchange messages with the client through
//! a metered mailbox, and an adversary tap records what a coalition receives.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::audit::{self, CoalitionView, Observation, PosteriorTable};
use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::protocol::{
    ClientState, Query, RepairTranscript, ResamplePolicy, Scheme, SchemeParams, Secret, StorageNode,
};
use crate::rs::Codeword;

#[derive(Clone, Debug)]
pub struct Cluster {
    params: SchemeParams,
    codeword: Codeword,
    nodes: Vec<StorageNode>,
}

impl Cluster {
    /// Encodes `message` (coefficients, or data symbols when `systematic`) and
    /// places one symbol per node.
    pub fn build(params: SchemeParams, message: &[FieldElem], systematic: bool) -> Result<Self> {
        let code = params.code();
        let codeword = if systematic {
            code.encode_systematic(message)?
        } else {
            code.encode(message)?
        };
        Ok(Self::from_codeword(params, codeword))
    }

    pub fn from_codeword(params: SchemeParams, codeword: Codeword) -> Self {
        let nodes = (0..params.code().n())
            .map(|pos| params.storage_node(&codeword, pos))
            .collect();
        Self {
            params,
            codeword,
            nodes,
        }
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn codeword(&self) -> &Codeword {
        &self.codeword
    }

    pub fn nodes(&self) -> &[StorageNode] {
        &self.nodes
    }

    fn node(&self, alpha: FieldElem) -> Result<&StorageNode> {
        self.nodes
            .iter()
            .find(|n| n.alpha == alpha)
            .ok_or(Error::UnknownTarget(alpha.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Message {
    Query(Query),
    Response(Vec<FieldElem>),
}

/// A message between the client and the node at `node`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub node: FieldElem,
    pub message: Message,
}

/// Delivers messages, meters traffic and lets a coalition watch its own inbox.
#[derive(Debug, Default)]
pub struct Mailbox {
    log: Vec<Envelope>,
    tap: BTreeSet<FieldElem>,
    observed: Vec<Observation>,
    up: usize,
    down: usize,
}

impl Mailbox {
    pub fn with_tap(coalition: &[FieldElem]) -> Self {
        Self {
            tap: coalition.iter().copied().collect(),
            ..Self::default()
        }
    }

    pub fn post(&mut self, env: Envelope) {
        match &env.message {
            Message::Query(q) => {
                self.up += q.len();
                if self.tap.contains(&env.node) {
                    self.observed.push(Observation {
                        alpha: env.node,
                        query: q.clone(),
                    });
                }
            }
            Message::Response(r) => self.down += r.len(),
        }
        self.log.push(env);
    }

    pub fn log(&self) -> &[Envelope] {
        &self.log
    }

    pub fn upload_symbols(&self) -> usize {
        self.up
    }

    pub fn download_subsymbols(&self) -> usize {
        self.down
    }
}

#[derive(Clone, Debug)]
pub struct Session {
    pub id: u64,
    pub transcript: RepairTranscript,
    pub view: CoalitionView,
}

/// Draws randomness from `seed` and runs one repair (or retrieval) of `beta`.
pub fn run_session(
    cluster: &Cluster,
    beta: FieldElem,
    seed: u64,
    coalition: &[FieldElem],
) -> Result<Session> {
    let state = ClientState::draw(&cluster.params, beta, seed, ResamplePolicy::Resample)?;
    run_session_with(cluster, &state, coalition, seed)
}

pub fn run_session_with(
    cluster: &Cluster,
    state: &ClientState,
    coalition: &[FieldElem],
    id: u64,
) -> Result<Session> {
    let params = &cluster.params;
    let f = params.field();
    for a in coalition {
        cluster.node(*a)?;
    }
    let ctx = params.node_context();
    let mut mail = Mailbox::with_tap(coalition);
    let mut exchanges = Vec::new();
    let mut responses = BTreeMap::new();
    for (alpha, q) in state.queries(params) {
        mail.post(Envelope {
            node: alpha,
            message: Message::Query(q.clone()),
        });
        let resp = cluster.node(alpha)?.respond(&ctx, &q);
        mail.post(Envelope {
            node: alpha,
            message: Message::Response(resp.clone()),
        });
        responses.insert(alpha, resp.clone());
        exchanges.push((alpha, q, resp));
    }
    let value = state.recover(params, &responses)?;
    let transcript = RepairTranscript::new(f, state, &exchanges, value);
    if transcript.bandwidth_down_subsymbols != mail.download_subsymbols()
        || transcript.bandwidth_up_symbols != mail.upload_symbols()
    {
        return Err(Error::Internal(
            "metered traffic disagrees with the transcript".into(),
        ));
    }
    // coalition order as given, not delivery order
    let mut observations = Vec::with_capacity(coalition.len());
    for a in coalition {
        let obs = mail
            .observed
            .iter()
            .find(|o| o.alpha == *a)
            .cloned()
            .ok_or_else(|| {
                Error::MalformedView(format!("node {a} receives no query in this session"))
            })?;
        observations.push(obs);
    }
    Ok(Session {
        id,
        transcript,
        view: CoalitionView {
            scheme: params.scheme(),
            observations,
        },
    })
}

#[derive(Serialize)]
struct LogLine<'a> {
    id: u64,
    coalition: Vec<u32>,
    transcript: &'a RepairTranscript,
}

pub fn write_session_log<W: Write>(sessions: &[Session], mut out: W) -> Result<()> {
    for s in sessions {
        let line = LogLine {
            id: s.id,
            coalition: s.view.coalition().iter().map(|a| a.0).collect(),
            transcript: &s.transcript,
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Every private state the client can draw for target `beta`. Masks with
/// `R(beta) = 0` are dropped under [`ResamplePolicy::Resample`].
pub fn enumerate_states(
    params: &SchemeParams,
    beta: FieldElem,
    policy: ResamplePolicy,
) -> Result<Vec<Secret>> {
    let f = params.field();
    Ok(match params.scheme() {
        Scheme::Plain => vec![Secret::None],
        Scheme::HiddenSubspace => {
            let catalog = params
                .catalog()
                .ok_or_else(|| Error::Internal("missing catalog".into()))?;
            let mut out = Vec::new();
            for e in catalog.entries() {
                for chi in audit::ordered_bases(f, &e.image_span) {
                    out.push(Secret::Subspace {
                        w: e.subspace.clone(),
                        chi,
                    });
                }
            }
            out
        }
        Scheme::SecretSharing | Scheme::Retrieval => {
            let t = params.t();
            let total = f
                .order()
                .checked_pow(t as u32)
                .filter(|&x| x <= 1 << 24)
                .ok_or_else(|| Error::Infeasible("too many masks to enumerate".into()))?;
            let powers: Vec<_> = (0..t).map(|s| f.pow(beta, s as u64)).collect();
            (0..total)
                .filter_map(|mut idx| {
                    let coeffs: Vec<FieldElem> = (0..t)
                        .map(|_| {
                            let c = FieldElem((idx % f.order()) as u32);
                            idx /= f.order();
                            c
                        })
                        .collect();
                    let at = f.sum(coeffs.iter().zip(&powers).map(|(&c, &p)| f.mul(c, p)));
                    (policy == ResamplePolicy::Unconditioned || !at.is_zero())
                        .then_some(Secret::Mask(coeffs))
                })
                .collect()
        }
    })
}

/// Where the private states of a batch audit come from.
#[derive(Clone, Debug)]
pub enum StateSource {
    /// Every state, without resampling.
    Exhaustive,
    /// Seeded draws per target, with the default resampling.
    Seeds(std::ops::Range<u64>),
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub coalition: Vec<u32>,
    pub view: audit::ViewJson,
    pub table: PosteriorTable,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchSummary {
    pub pass: bool,
    pub coalitions: usize,
    pub views: usize,
    /// Largest `max / min` count ratio seen.
    pub worst_ratio: f64,
    /// Same, for the tables conditioned on `R(beta) != 0`.
    pub worst_conditioned_ratio: Option<f64>,
    pub witness: Option<Witness>,
}

/// All coalitions of the given size in lexicographic order of positions.
pub fn coalitions(alphas: &[FieldElem], size: usize) -> Vec<Vec<FieldElem>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        alphas: &[FieldElem],
        start: usize,
        size: usize,
        cur: &mut Vec<FieldElem>,
        out: &mut Vec<Vec<FieldElem>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..alphas.len() {
            cur.push(alphas[i]);
            rec(alphas, i + 1, size, cur, out);
            cur.pop();
        }
    }
    rec(alphas, 0, size, &mut cur, &mut out);
    out
}

type Audited = (Vec<FieldElem>, CoalitionView, audit::AuditReport);

/// Audits every view reachable by every coalition of size `1..=max_coalition`,
/// over every target. Passes when every exact table is uniform.
pub fn batch_audit(
    params: &SchemeParams,
    max_coalition: usize,
    source: &StateSource,
) -> Result<BatchSummary> {
    let alphas = params.code().alphas().to_vec();
    let mut states: Vec<ClientState> = Vec::new();
    for &beta in &alphas {
        match source {
            StateSource::Exhaustive => {
                for s in enumerate_states(params, beta, ResamplePolicy::Unconditioned)? {
                    states.push(ClientState::with_secret(params, beta, s)?);
                }
            }
            StateSource::Seeds(range) => {
                for seed in range.clone() {
                    states.push(ClientState::draw(
                        params,
                        beta,
                        seed,
                        ResamplePolicy::Resample,
                    )?);
                }
            }
        }
    }
    let queries: Vec<(FieldElem, BTreeMap<FieldElem, Query>)> = states
        .par_iter()
        .map(|st| (st.beta(), st.queries(params).into_iter().collect()))
        .collect();
    let all: Vec<Vec<FieldElem>> = (1..=max_coalition)
        .flat_map(|s| coalitions(&alphas, s))
        .collect();
    let per: Vec<Result<(usize, Vec<Audited>)>> = all
        .par_iter()
        .map(|coal| {
            let mut views = BTreeSet::new();
            for (beta, q) in &queries {
                if params.scheme() != Scheme::Retrieval && coal.contains(beta) {
                    continue;
                }
                let observations = coal
                    .iter()
                    .map(|a| Observation {
                        alpha: *a,
                        query: q[a].clone(),
                    })
                    .collect();
                views.insert(CoalitionView {
                    scheme: params.scheme(),
                    observations,
                });
            }
            let n = views.len();
            let reports = views
                .into_iter()
                .map(|v| audit::audit(params, &v).map(|r| (coal.clone(), v, r)))
                .collect::<Result<Vec<_>>>()?;
            Ok((n, reports))
        })
        .collect();
    let mut summary = BatchSummary {
        pass: true,
        coalitions: all.len(),
        views: 0,
        worst_ratio: 1.0,
        worst_conditioned_ratio: None,
        witness: None,
    };
    for item in per {
        let (n, reports) = item?;
        summary.views += n;
        for (coal, view, r) in reports {
            let table = PosteriorTable::from_counts(r.candidates.clone());
            let ratio = table.ratio();
            if ratio > summary.worst_ratio {
                summary.worst_ratio = ratio;
            }
            if let Some(c) = &r.conditioned {
                let cr = c.ratio();
                summary.worst_conditioned_ratio = Some(
                    summary
                        .worst_conditioned_ratio
                        .map_or(cr, |w: f64| w.max(cr)),
                );
            }
            if !table.uniform && summary.pass {
                summary.pass = false;
                summary.witness = Some(Witness {
                    coalition: coal.iter().map(|a| a.0).collect(),
                    view: view.to_json(),
                    table,
                });
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldConfig;
    use crate::rs::CodeSpec;

    /// GF(8), n = 8, k = 5 holding `x^e + 1`.
    fn gf8_cluster(scheme: Scheme, t: usize, e: u64) -> Cluster {
        let code = CodeSpec::full_length(FieldConfig::gf8().build().unwrap(), 5).unwrap();
        let params = SchemeParams::new(scheme, code, 1, t).unwrap();
        let f = params.field().clone();
        let vals = params
            .code()
            .alphas()
            .iter()
            .map(|&a| f.add(f.pow(a, e), FieldElem::ONE))
            .collect();
        Cluster::from_codeword(params, Codeword::from_values(vals))
    }

    #[test]
    fn gf8_masked_session() {
        let cluster = gf8_cluster(Scheme::SecretSharing, 2, 4);
        let st = ClientState::with_secret(
            cluster.params(),
            FieldElem(6),
            Secret::Mask(vec![FieldElem(3), FieldElem(4)]),
        )
        .unwrap();
        let s = run_session_with(&cluster, &st, &[FieldElem(0), FieldElem(1)], 0).unwrap();
        let f = cluster.params().field();
        let want = f.add(f.pow(FieldElem(6), 4), FieldElem::ONE);
        assert_eq!(s.transcript.recovered, want.0);
        assert_eq!(s.transcript.bandwidth_down_subsymbols, 14);
        assert_eq!(s.transcript.bandwidth_up_symbols, 7);
        let kappas: Vec<_> = s
            .view
            .observations
            .iter()
            .map(|o| o.query.clone())
            .collect();
        assert_eq!(
            kappas,
            vec![Query::Masked(FieldElem(6)), Query::Masked(FieldElem(1))]
        );
    }

    #[test]
    fn degree_k_data_is_not_repairable() {
        // x^5 + 1 is not in RS(8, 5): the parity checks do not annihilate it
        let cluster = gf8_cluster(Scheme::SecretSharing, 2, 5);
        let st = ClientState::with_secret(
            cluster.params(),
            FieldElem(6),
            Secret::Mask(vec![FieldElem(3), FieldElem(4)]),
        )
        .unwrap();
        let s = run_session_with(&cluster, &st, &[], 0).unwrap();
        let f = cluster.params().field();
        assert_ne!(
            s.transcript.recovered,
            f.add(f.pow(FieldElem(6), 5), FieldElem::ONE).0
        );
    }

    #[test]
    fn empty_message_rejected() {
        let code = CodeSpec::full_length(FieldConfig::gf4().build().unwrap(), 2).unwrap();
        let params = SchemeParams::new(Scheme::Plain, code, 1, 0).unwrap();
        assert!(matches!(
            Cluster::build(params, &[], false),
            Err(Error::WrongLength { .. })
        ));
    }

    #[test]
    fn replay_is_identical() {
        let cluster = gf8_cluster(Scheme::Retrieval, 2, 4);
        let a = run_session(&cluster, FieldElem(5), 42, &[FieldElem(1)]).unwrap();
        let b = run_session(&cluster, FieldElem(5), 42, &[FieldElem(1)]).unwrap();
        let mut la = Vec::new();
        let mut lb = Vec::new();
        write_session_log(&[a], &mut la).unwrap();
        write_session_log(&[b], &mut lb).unwrap();
        assert_eq!(la, lb);
        assert!(String::from_utf8(la)
            .unwrap()
            .contains("\"bandwidth_down_subsymbols\":16"));
    }

    #[test]
    fn coalition_enumeration() {
        let a: Vec<_> = (0..5).map(FieldElem).collect();
        assert_eq!(coalitions(&a, 2).len(), 10);
        assert_eq!(coalitions(&a, 1)[4], vec![FieldElem(4)]);
    }

    #[test]
    fn state_counts() {
        let c = gf8_cluster(Scheme::SecretSharing, 2, 4);
        assert_eq!(
            enumerate_states(c.params(), FieldElem(3), ResamplePolicy::Unconditioned)
                .unwrap()
                .len(),
            64
        );
        assert_eq!(
            enumerate_states(c.params(), FieldElem(3), ResamplePolicy::Resample)
                .unwrap()
                .len(),
            56
        );
        let h = gf8_cluster(Scheme::HiddenSubspace, 1, 4);
        assert_eq!(
            enumerate_states(h.params(), FieldElem(3), ResamplePolicy::Resample)
                .unwrap()
                .len(),
            7 * 6
        );
    }
}
