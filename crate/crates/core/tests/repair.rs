use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use subrepair::protocol::{parity_polys, run_session, Secret};
use subrepair::rs::dual_multipliers;
use subrepair::sim::enumerate_states;
use subrepair::{
    ClientState, CodeSpec, Codeword, FieldConfig, FieldCtx, FieldElem, Poly, ResamplePolicy,
    Scheme, SchemeParams,
};

fn field(c: FieldConfig) -> FieldCtx {
    c.build().unwrap()
}

fn params(f: &FieldCtx, scheme: Scheme, n: usize, k: usize, m: usize, t: usize) -> SchemeParams {
    SchemeParams::new(scheme, CodeSpec::first_n(f.clone(), n, k).unwrap(), m, t).unwrap()
}

/// Messages `xi_j x^i`, a subfield basis of the message space. Recovery is
/// linear over the subfield in the stored data, so passing on these covers
/// every message.
fn basis_messages(f: &FieldCtx, k: usize) -> Vec<Vec<FieldElem>> {
    let mut out = Vec::new();
    for i in 0..k {
        for &u in f.standard_basis().elems() {
            let mut msg = vec![FieldElem::ZERO; k];
            msg[i] = u;
            out.push(msg);
        }
    }
    out
}

fn all_messages(f: &FieldCtx, k: usize) -> Vec<Vec<FieldElem>> {
    let total = f.order().pow(k as u32);
    (0..total)
        .map(|mut idx| {
            (0..k)
                .map(|_| {
                    let c = FieldElem((idx % f.order()) as u32);
                    idx /= f.order();
                    c
                })
                .collect()
        })
        .collect()
}

/// Runs every `(beta, state)` against every message; returns the session count.
fn check_every_state(p: &SchemeParams, messages: &[Vec<FieldElem>]) -> usize {
    let codewords: Vec<Codeword> = messages
        .iter()
        .map(|m| p.code().encode(m).unwrap())
        .collect();
    p.code()
        .alphas()
        .par_iter()
        .map(|&beta| {
            let pos = p.code().position(beta).unwrap();
            let states = enumerate_states(p, beta, ResamplePolicy::Resample).unwrap();
            for s in &states {
                let st = ClientState::with_secret(p, beta, s.clone()).unwrap();
                for c in &codewords {
                    let t = run_session(p, c, &st).unwrap();
                    assert_eq!(
                        FieldElem(t.recovered),
                        c.values()[pos],
                        "{} at {beta} with {s:?}",
                        p.scheme()
                    );
                    assert_eq!(t.bandwidth_down_subsymbols, p.bandwidth());
                }
            }
            states.len() * codewords.len()
        })
        .sum()
}

#[test]
fn gf4_every_message_every_state() {
    let f = field(FieldConfig::gf4());
    let msgs = all_messages(&f, 2);
    assert_eq!(msgs.len(), 16);
    for (scheme, t) in [
        (Scheme::Plain, 0),
        (Scheme::HiddenSubspace, 1),
        (Scheme::SecretSharing, 1),
        (Scheme::Retrieval, 1),
    ] {
        let p = params(&f, scheme, 4, 2, 1, t);
        assert!(check_every_state(&p, &msgs) > 0);
    }
}

#[test]
fn gf8_every_state_on_a_message_basis() {
    let f = field(FieldConfig::gf8());
    for (scheme, k, m, t) in [
        (Scheme::Plain, 5, 1, 0),
        (Scheme::Plain, 4, 2, 0),
        (Scheme::HiddenSubspace, 6, 1, 1),
        (Scheme::HiddenSubspace, 4, 2, 1),
        (Scheme::SecretSharing, 5, 1, 2),
        (Scheme::SecretSharing, 2, 2, 3),
        (Scheme::Retrieval, 5, 1, 2),
        (Scheme::Retrieval, 3, 1, 4),
    ] {
        let p = params(&f, scheme, 8, k, m, t);
        check_every_state(&p, &basis_messages(&f, k));
    }
}

#[test]
fn other_fields_every_state_on_a_message_basis() {
    for (cfg, n, k, m, t) in [
        (FieldConfig::gf16_over_gf4(), 16, 9, 1, 2),
        (FieldConfig::gf9(), 9, 4, 1, 2),
    ] {
        let f = field(cfg);
        for scheme in [
            Scheme::HiddenSubspace,
            Scheme::SecretSharing,
            Scheme::Retrieval,
        ] {
            let t = if scheme == Scheme::HiddenSubspace {
                1
            } else {
                t
            };
            let p = params(&f, scheme, n, k, m, t);
            check_every_state(&p, &basis_messages(&f, k));
        }
    }
}

#[test]
fn punctured_code_recovers() {
    let f = field(FieldConfig::gf16());
    let alphas = vec![2, 3, 5, 7, 11, 13, 14, 15, 1, 9]
        .into_iter()
        .map(FieldElem)
        .collect();
    let code = CodeSpec::new(f.clone(), alphas, 4).unwrap();
    for (scheme, t) in [
        (Scheme::Plain, 0),
        (Scheme::HiddenSubspace, 1),
        (Scheme::SecretSharing, 2),
        (Scheme::Retrieval, 2),
    ] {
        let p = SchemeParams::new(scheme, code.clone(), 2, t).unwrap();
        check_every_state(&p, &basis_messages(&f, 4)[..4]);
    }
}

#[test]
fn random_messages_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for cfg in [FieldConfig::gf8(), FieldConfig::gf16()] {
        let f = field(cfg);
        let n = f.order() as usize;
        for (scheme, t) in [
            (Scheme::Plain, 0),
            (Scheme::HiddenSubspace, 1),
            (Scheme::SecretSharing, 2),
            (Scheme::Retrieval, 2),
        ] {
            let p = params(&f, scheme, n, n - 3, 1, t);
            for _ in 0..300 {
                let msg: Vec<_> = (0..p.code().k())
                    .map(|_| FieldElem(rng.gen_range(0..n as u32)))
                    .collect();
                let c = p.code().encode(&msg).unwrap();
                let pos = rng.gen_range(0..n);
                let beta = p.code().alphas()[pos];
                let st = ClientState::draw(&p, beta, rng.gen(), ResamplePolicy::Resample).unwrap();
                assert_eq!(
                    FieldElem(run_session(&p, &c, &st).unwrap().recovered),
                    c.values()[pos]
                );
            }
        }
    }
}

#[test]
fn dual_multipliers_annihilate_low_degree_evaluations() {
    let f = field(FieldConfig::gf16());
    let alphas: Vec<_> = [0, 1, 4, 6, 9, 12, 15].into_iter().map(FieldElem).collect();
    let lambdas = dual_multipliers(&f, &alphas).unwrap();
    assert!(lambdas.iter().all(|l| !l.is_zero()));
    let n = alphas.len() as u64;
    let moment = |e: u64| {
        f.sum(
            alphas
                .iter()
                .zip(&lambdas)
                .map(|(&a, &l)| f.mul(l, f.pow(a, e))),
        )
    };
    for e in 0..n - 1 {
        assert!(moment(e).is_zero(), "x^{e}");
    }
    assert!(!moment(n - 1).is_zero());
    assert!(dual_multipliers(&f, &[FieldElem(3), FieldElem(3)]).is_err());
}

#[test]
fn parity_polynomials_are_legitimate() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = field(FieldConfig::gf16());
    for (scheme, t) in [
        (Scheme::Plain, 0),
        (Scheme::HiddenSubspace, 1),
        (Scheme::SecretSharing, 3),
        (Scheme::Retrieval, 3),
    ] {
        let p = params(&f, scheme, 16, 10, 2, t);
        for seed in 0..20 {
            let beta = FieldElem(rng.gen_range(0..16));
            let st = ClientState::draw(&p, beta, seed, ResamplePolicy::Resample).unwrap();
            let polys = parity_polys(&p, &st);
            assert_eq!(polys.len(), f.ell());
            let msg: Vec<_> = (0..10).map(|_| FieldElem(rng.gen_range(0..16))).collect();
            let c = p.code().encode(&msg).unwrap();
            for r in &polys {
                assert!(r.degree().unwrap() < 16 - 10);
                assert!(p.code().verify_parity(&c, r).unwrap());
            }
            // the checks span the whole field at beta
            let at: Vec<_> = polys.iter().map(|r| r.eval(&f, beta)).collect();
            let rows: Vec<_> = at.iter().map(|&x| f.coords(x)).collect();
            let independent = rows.iter().enumerate().all(|(i, r)| !rows[..i].contains(r));
            assert!(independent && at.iter().all(|x| !x.is_zero()));
        }
    }
}

/// Secret-sharing responses equal plain-scheme responses for `g = f R` on the
/// code of dimension `k + t - 1`, and plain recovery of `g` gives `f(beta) R(beta)`.
#[test]
fn masked_sessions_are_plain_repair_of_the_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = field(FieldConfig::gf16());
    let (n, k, t) = (16, 9, 3);
    let ss = params(&f, Scheme::SecretSharing, n, k, 2, t);
    let plain = params(&f, Scheme::Plain, n, k + t - 1, 2, 0);
    for seed in 0..200 {
        let msg: Vec<_> = (0..k).map(|_| FieldElem(rng.gen_range(0..16))).collect();
        let c = ss.code().encode(&msg).unwrap();
        let pos = rng.gen_range(0..n);
        let beta = ss.code().alphas()[pos];
        let st = ClientState::draw(&ss, beta, seed, ResamplePolicy::Resample).unwrap();
        let Secret::Mask(r) = st.secret() else {
            unreachable!()
        };
        let r = Poly::from_coeffs(r.clone());
        let g = Codeword::from_values(
            ss.code()
                .alphas()
                .iter()
                .zip(c.values())
                .map(|(&a, &v)| f.mul(v, r.eval(&f, a)))
                .collect(),
        );
        let ps = ClientState::with_secret(&plain, beta, Secret::None).unwrap();
        let a = run_session(&ss, &c, &st).unwrap();
        let b = run_session(&plain, &g, &ps).unwrap();
        let ra: Vec<_> = a
            .nodes
            .iter()
            .map(|x| (x.alpha, x.response.clone()))
            .collect();
        let rb: Vec<_> = b
            .nodes
            .iter()
            .map(|x| (x.alpha, x.response.clone()))
            .collect();
        assert_eq!(ra, rb);
        assert_eq!(
            FieldElem(b.recovered),
            f.mul(c.values()[pos], r.eval(&f, beta))
        );
    }
}

#[test]
fn hidden_subspace_costs_the_same_as_plain() {
    for cfg in [
        FieldConfig::gf8(),
        FieldConfig::gf16(),
        FieldConfig::gf256(),
    ] {
        let f = field(cfg);
        let n = f.order() as usize;
        let a = params(&f, Scheme::Plain, n, n / 2, 1, 0);
        let b = params(&f, Scheme::HiddenSubspace, n, n / 2, 1, 1);
        assert_eq!(a.bandwidth(), b.bandwidth());
        assert_eq!(a.bandwidth(), (n - 1) * (f.ell() - 1));
    }
}

#[test]
fn node_answers_do_not_depend_on_the_target() {
    let f = field(FieldConfig::gf8());
    let p = params(&f, Scheme::HiddenSubspace, 8, 5, 1, 1);
    let c = p
        .code()
        .encode(&[
            FieldElem(1),
            FieldElem(2),
            FieldElem(3),
            FieldElem(4),
            FieldElem(5),
        ])
        .unwrap();
    let ctx = p.node_context();
    let st = ClientState::draw(&p, FieldElem(3), 9, ResamplePolicy::Resample).unwrap();
    let mut seen = BTreeMap::new();
    for (alpha, q) in st.queries(&p) {
        let node = p.storage_node(&c, p.code().position(alpha).unwrap());
        seen.insert(alpha, node.respond(&ctx, &q));
        // the same query replayed under any other session target gets the same answer
        assert_eq!(node.respond(&ctx, &q), seen[&alpha]);
    }
    assert_eq!(seen.len(), 7);
}

proptest! {
    #[test]
    fn encode_then_decode_from_any_k_positions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = field(FieldConfig::gf16());
        let code = CodeSpec::full_length(f.clone(), 6).unwrap();
        let msg: Vec<_> = (0..6).map(|_| FieldElem(rng.gen_range(0..16))).collect();
        let c = code.encode(&msg).unwrap();
        let mut pos: Vec<usize> = (0..16).collect();
        for i in 0..6 {
            let j = rng.gen_range(i..16);
            pos.swap(i, j);
        }
        let picked: Vec<_> = pos[..6].iter().map(|&i| (i, c.values()[i])).collect();
        let back = code.naive_decode(&picked).unwrap();
        prop_assert_eq!(back.values(), c.values());
        let sys = code.encode_systematic(&msg).unwrap();
        prop_assert_eq!(&sys.values()[..6], &msg[..]);
    }
}
