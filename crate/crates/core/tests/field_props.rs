use proptest::prelude::*;
use subrepair::gf::trace_dual_basis;
use subrepair::{Basis, FieldConfig, FieldCtx, FieldElem};

fn fields() -> Vec<FieldCtx> {
    [
        FieldConfig::gf4(),
        FieldConfig::gf8(),
        FieldConfig::gf16(),
        FieldConfig::gf16_over_gf4(),
        FieldConfig::gf256(),
        FieldConfig::gf9(),
    ]
    .iter()
    .map(|c| c.build().unwrap())
    .collect()
}

fn pick(f: &FieldCtx, r: u64) -> FieldElem {
    FieldElem((r % f.order()) as u32)
}

proptest! {
    #[test]
    fn field_axioms(which in 0usize..6, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = &fields()[which];
        let (a, b, c) = (pick(f, a), pick(f, b), pick(f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), FieldElem::ONE);
        }
    }

    #[test]
    fn trace_is_linear_over_the_subfield(which in 0usize..6, x in any::<u64>(), y in any::<u64>(), s in any::<u64>(), t in any::<u64>()) {
        let f = &fields()[which];
        let (x, y) = (pick(f, x), pick(f, y));
        let b = f.subfield();
        let (s, t) = (b[(s % b.len() as u64) as usize], b[(t % b.len() as u64) as usize]);
        let lhs = f.trace(f.add(f.mul(s, x), f.mul(t, y)));
        let rhs = f.add(f.mul(s, f.trace(x)), f.mul(t, f.trace(y)));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(f.is_in_subfield(f.trace(x)));
        prop_assert_eq!(f.trace(f.frobenius(x)), f.trace(x));
    }

    #[test]
    fn coordinates_roundtrip(which in 0usize..6, x in any::<u64>()) {
        let f = &fields()[which];
        let x = pick(f, x);
        let c = f.coords(x);
        prop_assert_eq!(c.len(), f.ell());
        prop_assert!(c.iter().all(|&e| f.is_in_subfield(e)));
        prop_assert_eq!(f.from_coords(&c), x);
        let basis = f.standard_basis();
        let traces: Vec<_> = basis.elems().iter().map(|&u| f.trace(f.mul(u, x))).collect();
        prop_assert_eq!(basis.reconstruct(f, &traces), x);
    }

    #[test]
    fn random_basis_has_a_trace_dual(which in 0usize..5, seed in any::<u64>()) {
        let f = &fields()[which];
        let mut elems = Vec::new();
        let mut s = seed;
        while elems.len() < f.ell() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            elems.push(pick(f, s >> 16));
        }
        if let Ok(basis) = Basis::new(f, elems) {
            for (i, &u) in basis.elems().iter().enumerate() {
                for (j, &d) in basis.dual_elems().iter().enumerate() {
                    let want = if i == j { FieldElem::ONE } else { FieldElem::ZERO };
                    prop_assert_eq!(f.trace(f.mul(u, d)), want);
                }
            }
            let dual = trace_dual_basis(f, &basis);
            prop_assert_eq!(dual.dual_elems(), basis.elems());
        }
    }
}

#[test]
fn frobenius_fixes_exactly_the_subfield() {
    for f in fields() {
        let fixed: Vec<_> = f.elements().filter(|&x| f.frobenius(x) == x).collect();
        assert_eq!(fixed, f.subfield());
        assert_eq!(fixed.len() as u64, f.q());
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for f in fields() {
        let g = f.primitive();
        let mut seen = std::collections::BTreeSet::new();
        let mut x = FieldElem::ONE;
        for _ in 0..f.order() - 1 {
            seen.insert(x);
            x = f.mul(x, g);
        }
        assert_eq!(x, FieldElem::ONE);
        assert_eq!(seen.len() as u64, f.order() - 1);
    }
}
