use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::group_algebra::builtin;
use crate::scalars::{parse_rational, rat, rat_int};

fn c(q: Rational) -> CycloElement {
    CycloElement::from(q)
}

fn ci(k: i64) -> CycloElement {
    CycloElement::from_int(k)
}

#[test]
fn euler_factor_examples() {
    let g1 = builtin("C1").unwrap();
    let e = euler_factor(&g1, 0, 1, 2, EulerNormalisation::AsPrinted).unwrap();
    assert_eq!(e.value, CentralElement::from_rationals(vec![rat(1, 4)]));
    let e = euler_factor(&g1, 0, 1, 2, EulerNormalisation::Customary).unwrap();
    assert_eq!(e.value, CentralElement::from_rationals(vec![rat(3, 4)]));

    let c2 = builtin("C2").unwrap();
    let e = euler_factor(&c2, 1, 0, 5, EulerNormalisation::AsPrinted).unwrap();
    assert_eq!(
        e.value,
        CentralElement::from_rationals(vec![rat(26, 25), rat(26, 25)])
    );
    let e = euler_factor(&c2, 0, 0, 7, EulerNormalisation::AsPrinted).unwrap();
    assert_eq!(
        e.value,
        CentralElement::from_rationals(vec![rat(50, 49); 2])
    );

    assert!(matches!(
        euler_factor(&g1, 0, 1, 1, EulerNormalisation::AsPrinted),
        Err(Error::RangeError(_))
    ));
}

#[test]
fn euler_factor_involution_swaps_dual_components() {
    let c3 = builtin("C3").unwrap();
    let e = euler_factor(&c3, 1, 2, 3, EulerNormalisation::AsPrinted).unwrap();
    for chi in 0..3 {
        assert_eq!(e.involuted.comp(chi), e.value.comp(c3.dual(chi)));
    }
    assert_ne!(e.value.comp(1), e.value.comp(2));
}

proptest! {
    #[test]
    fn euler_factor_matches_template(nv in 2u64..60) {
        let g1 = builtin("C1").unwrap();
        let a_v = 1 + nv as i64;
        let e = euler_factor(&g1, 0, a_v, nv, EulerNormalisation::AsPrinted).unwrap();
        let n2 = (nv * nv) as i64;
        let text = format!("{}/{}", n2 - a_v * n2 + 1, n2);
        prop_assert_eq!(e.value.comp(0).to_rational().unwrap(), parse_rational(&text).unwrap());
    }

    #[test]
    fn congruence_passes_for_integral_data(qs in prop::collection::vec(-9i64..9, 6), ds_ in prop::collection::vec(-4i64..4, 6), t in 1i64..4, iq in 0u8..2) {
        for (name, p) in [("S3", 3u64), ("D5", 5)] {
            let ga = builtin(name).unwrap();
            let ds = DihedralStructure::new(&ga, p).unwrap();
            let k = ga.num_chars();
            let q: Vec<_> = qs[..k].iter().map(|&x| ci(x)).collect();
            let d: Vec<_> = ds_[..k].iter().map(|&x| ci(x)).collect();
            prop_assert!(dihedral_congruence_check(&ds, &q, t, &d, iq).unwrap().passed());
        }
    }
}

#[test]
fn log_resolvent_examples() {
    let g1 = builtin("C1").unwrap();
    let m = Matrix::from_rows(
        vec![vec![GroupRingElement::from_rationals(vec![rat(7, 3)])]],
        1,
    );
    assert_eq!(
        log_resolvent(&g1, &m).unwrap(),
        CentralElement::from_rationals(vec![rat(7, 3)])
    );

    let c2 = builtin("C2").unwrap();
    let m = c2.gr_zeros(2, 2);
    assert!(log_resolvent(&c2, &m).unwrap().is_zero());

    let table = vec![vec![vec![c(rat(5, 2)), ci(3)]]];
    let m = assemble_resolvent(&c2, &table).unwrap();
    assert_eq!(
        log_resolvent(&c2, &m).unwrap(),
        CentralElement::from_rationals(vec![rat(11, 2), rat(-1, 2)])
    );

    assert!(matches!(
        log_resolvent(&c2, &c2.gr_zeros(1, 2)),
        Err(Error::ShapeError(_))
    ));
    assert!(matches!(
        assemble_resolvent(&c2, &[vec![vec![ci(1)]]]),
        Err(Error::ShapeError(_))
    ));
}

#[test]
fn height_matrix_examples() {
    let g1 = builtin("C1").unwrap();
    let one = g1.central_one();
    assert!(height_matrix_nr(&g1, &[], 0, &one).unwrap().is_one());
    let single = vec![Matrix::from_rows(vec![vec![c(rat(9, 7))]], 1)];
    assert_eq!(
        height_matrix_nr(&g1, &single, 1, &one).unwrap(),
        CentralElement::from_rationals(vec![rat(9, 7)])
    );
    let diag = vec![Matrix::from_fn(3, 3, |i, j| {
        if i == j {
            ci(i as i64 + 2)
        } else {
            ci(0)
        }
    })];
    assert_eq!(
        height_matrix_nr(&g1, &diag, 3, &one).unwrap(),
        CentralElement::from_ints(&[24])
    );

    // Σ_g ⟨gP, Q⟩·g⁻¹ = 3 + σ on C2
    let c2 = builtin("C2").unwrap();
    let t = vec![
        Matrix::from_rows(vec![vec![ci(3)]], 1),
        Matrix::from_rows(vec![vec![ci(1)]], 1),
    ];
    assert_eq!(
        height_matrix_nr(&c2, &t, 1, &c2.central_one()).unwrap(),
        CentralElement::from_ints(&[4, 2])
    );
    let e = CentralElement::from_ints(&[0, 1]);
    assert_eq!(
        height_matrix_nr(&c2, &t, 1, &e).unwrap(),
        CentralElement::from_ints(&[0, 2])
    );

    // ⟨gP, Q⟩ on C3 with g⁻¹ placement checked on a non-real character
    let c3 = builtin("C3").unwrap();
    let t: Vec<_> = [0, 1, 0]
        .iter()
        .map(|&v| Matrix::from_rows(vec![vec![ci(v)]], 1))
        .collect();
    let nr = height_matrix_nr(&c3, &t, 1, &c3.central_one()).unwrap();
    let g = 1;
    for chi in 0..3 {
        assert_eq!(*nr.comp(chi), c3.character(chi)[c3.group().inv(g)]);
    }
}

fn ones(ga: &GroupAlgebra) -> KeyProductInput {
    let n = ga.order();
    let one = ga.central_one();
    KeyProductInput {
        a: 0,
        d: 1,
        alpha: Some(GroupRingElement::one(n)),
        y: Some(GroupRingElement::one(n)),
        l_value: Some(one.clone()),
        omega: Some(one.clone()),
        root_number: Some(one.clone()),
        log_resolvent: Some(one.clone()),
        height: Some(one.clone()),
        tau_star: Some(one.clone()),
        varrho: Some(vec![]),
        ..Default::default()
    }
}

#[test]
fn key_product_trivial_and_integrality() {
    let g1 = builtin("C1").unwrap();
    let mut inp = ones(&g1);
    inp.sha = Some(FinPModule::zero(3));
    let r = key_product(&g1, 3, &inp, KeyProductMode::General).unwrap();
    assert!(r.element.is_one() && r.integral && r.annihilates == Some(true) && r.passed());
    inp.sha = Some(FinPModule::with_trivial_action(3, vec![1], 1).unwrap());
    let r = key_product(&g1, 3, &inp, KeyProductMode::General).unwrap();
    assert_eq!(r.annihilates, Some(false));

    let mut inp = ones(&g1);
    inp.euler = vec![
        euler_factor(&g1, 0, 1, 2, EulerNormalisation::AsPrinted)
            .unwrap()
            .value,
    ];
    inp.l_value = Some(CentralElement::from_ints(&[4]));
    let r = key_product(&g1, 5, &inp, KeyProductMode::General).unwrap();
    assert!(r.element.is_one() && r.passed());

    let mut inp = ones(&g1);
    inp.omega = Some(CentralElement::from_ints(&[5]));
    let r = key_product(&g1, 5, &inp, KeyProductMode::General).unwrap();
    assert!(!r.integral && !r.passed());
    assert_eq!(r.coefficient_integral, vec![false]);
}

#[test]
fn key_product_reports_missing_constants() {
    let c2 = builtin("C2").unwrap();
    let inp = KeyProductInput {
        y: Some(GroupRingElement::one(2)),
        ..Default::default()
    };
    match key_product(&c2, 3, &inp, KeyProductMode::ClassicalSelmer) {
        Err(Error::IncompleteData(v)) => {
            assert_eq!(v, vec!["L", "Omega", "w", "height", "tau_star", "varrho"]);
        }
        other => panic!("{other:?}"),
    }
    let mut inp = ones(&c2);
    inp.log_resolvent = None;
    assert!(
        matches!(key_product(&c2, 3, &inp, KeyProductMode::General), Err(Error::IncompleteData(v)) if v == ["log_resolvent"])
    );
    assert!(key_product(&c2, 3, &inp, KeyProductMode::ClassicalSelmer).is_ok());
}

#[test]
fn key_product_is_order_independent() {
    let c3 = builtin("C3").unwrap();
    let mut inp = ones(&c3);
    let es: Vec<_> = [(1, 2, 7), (2, -1, 4), (0, 3, 5)]
        .iter()
        .map(|&(g, a, nv)| {
            euler_factor(&c3, g, a, nv, EulerNormalisation::AsPrinted)
                .unwrap()
                .value
        })
        .collect();
    inp.euler = es.clone();
    let r1 = key_product(&c3, 7, &inp, KeyProductMode::General).unwrap();
    inp.euler = es.into_iter().rev().collect();
    let r2 = key_product(&c3, 7, &inp, KeyProductMode::General).unwrap();
    assert_eq!(r1.element, r2.element);
    assert_eq!(r1.coefficients, r2.coefficients);
}

#[test]
fn key_product_general_formula() {
    // α·nr(y)^{2a}·ι_#(P)·L/(Ω·w^d)·LR·ht on C2 with a = 1, d = 2
    let c2 = builtin("C2").unwrap();
    let p = 7;
    let mut inp = ones(&c2);
    inp.a = 1;
    inp.d = 2;
    inp.alpha = Some(GroupRingElement::from_ints(&[2, 0]));
    inp.y = Some(GroupRingElement::from_ints(&[1, 1]));
    inp.e_above = Some(CentralElement::from_ints(&[1, 0]));
    inp.euler = vec![CentralElement::from_ints(&[3, 5])];
    inp.l_value = Some(CentralElement::from_ints(&[10, 0]));
    inp.omega = Some(CentralElement::from_ints(&[5, 1]));
    inp.root_number = Some(CentralElement::from_ints(&[-1, 1]));
    inp.log_resolvent = Some(CentralElement::from_ints(&[3, 2]));
    inp.height = Some(CentralElement::from_ints(&[1, 4]));
    let r = key_product(&c2, p, &inp, KeyProductMode::General).unwrap();
    // nr(y)^2 = 4 on the trivial component; 4·3·10/5·3·1 = 72
    assert_eq!(r.element, CentralElement::from_ints(&[72, 0]));
    assert_eq!(r.coefficients, GroupRingElement::from_ints(&[72, 72]));
    assert!(r.passed());
}

#[test]
fn key_product_classical_fitting_membership() {
    let g1 = builtin("C1").unwrap();
    let p = 3;
    let pres = Presentation::new(
        &g1,
        p,
        Matrix::from_rows(vec![vec![GroupRingElement::from_ints(&[3])]], 1),
    )
    .unwrap();
    let mut inp = ones(&g1);
    inp.selmer = Some(pres);
    inp.tau_star = Some(CentralElement::from_ints(&[3]));
    let r = key_product(&g1, p, &inp, KeyProductMode::ClassicalSelmer).unwrap();
    assert_eq!(r.fit_membership, Some(MembershipVerdict::Member));
    inp.tau_star = Some(CentralElement::from_ints(&[1]));
    let r = key_product(&g1, p, &inp, KeyProductMode::ClassicalSelmer).unwrap();
    assert_eq!(r.fit_membership, Some(MembershipVerdict::NotMember));
    assert!(!r.passed());

    // (τ*·ϱ)^d with ϱ = Nv^{dim fixed}
    let c2 = builtin("C2").unwrap();
    let mut inp = ones(&c2);
    inp.d = 2;
    inp.varrho = Some(vec![varrho(&[1, 0], 5)]);
    inp.tau_star = Some(CentralElement::from_ints(&[1, 3]));
    let r = key_product(&c2, 7, &inp, KeyProductMode::ClassicalSelmer).unwrap();
    assert_eq!(r.element, CentralElement::from_ints(&[25, 9]));
}

#[test]
fn dihedral_classification() {
    for (name, p) in [("S3", 3), ("D5", 5), ("C2", 3), ("C6", 3)] {
        let ga = builtin(name).unwrap();
        let ds = DihedralStructure::new(&ga, p);
        if name == "C6" {
            assert!(matches!(ds, Err(Error::ClassificationError(_))));
            continue;
        }
        let ds = ds.unwrap();
        assert_eq!(ds.in_p.iter().filter(|&&b| b).count() * 2, ga.order());
        assert_eq!(ds.class(0), PsiClass::Trivial);
    }
    for (name, p) in [
        ("D4", 3),
        ("Q8", 3),
        ("A4", 3),
        ("S3", 2),
        ("S3", 5),
        ("C3", 3),
    ] {
        let ga = builtin(name).unwrap();
        assert!(
            matches!(
                DihedralStructure::new(&ga, p),
                Err(Error::ClassificationError(_))
            ),
            "{name} {p}"
        );
    }
    let s3 = builtin("S3").unwrap();
    let ds = DihedralStructure::new(&s3, 3).unwrap();
    assert_eq!(
        ds.class(s3.character_index("rho").unwrap()),
        PsiClass::Induced
    );
}

fn s3_data(
    q1: Rational,
    qe: Rational,
    qr: Rational,
) -> (Arc<GroupAlgebra>, DihedralStructure, Vec<CycloElement>) {
    let s3 = builtin("S3").unwrap();
    let ds = DihedralStructure::new(&s3, 3).unwrap();
    let q = (0..3)
        .map(|chi| match ds.class(chi) {
            PsiClass::Trivial => c(q1.clone()),
            PsiClass::Sign => c(qe.clone()),
            PsiClass::Induced => c(qr.clone()),
        })
        .collect();
    (s3, ds, q)
}

#[test]
fn s3_congruence_examples() {
    let (s3, ds, q) = s3_data(rat(1, 2), rat(0, 1), rat(1, 2));
    let delta = vec![ci(1); 3];
    let r = dihedral_congruence_check(&ds, &q, 1, &delta, 0).unwrap();
    assert_eq!(r.verdicts.len(), 6);
    assert_eq!(r.verdicts[0].value, ci(2));
    assert!(r.passed());
    for v in &r.verdicts {
        // ρ(g) + ρ(τg) is 2 or −1 on P and ρ(τg) off P
        let rho = s3.character(s3.character_index("rho").unwrap());
        let tg = s3.group().mul(ds.tau, v.g);
        let expect = &ci(1) + &(&(&rho[v.g] + &rho[tg]) * &c(rat(1, 2)));
        assert_eq!(v.value, expect);
    }

    let (_, ds, q) = s3_data(rat(1, 3), rat(0, 1), rat(0, 1));
    let r = dihedral_congruence_check(&ds, &q, 1, &delta, 0).unwrap();
    assert!(r
        .verdicts
        .iter()
        .all(|v| v.value == c(rat(2, 3)) && !v.pass));
    assert_eq!(r.failures(), (0..6).collect::<Vec<_>>());

    // i_Q = 1: 2ε(g)𝒬_ε alone
    let (s3, ds, q) = s3_data(rat(0, 1), rat(1, 2), rat(0, 1));
    let r = dihedral_congruence_check(&ds, &q, 1, &delta, 1).unwrap();
    for v in &r.verdicts {
        assert_eq!(
            v.value,
            if ds.in_p[v.g] { ci(1) } else { ci(-1) },
            "{}",
            s3.group().label(v.g)
        );
    }

    // t_Q scales by t² and t⁴
    let (_, ds, q) = s3_data(rat(1, 9), rat(0, 1), rat(1, 81));
    let r = dihedral_congruence_check(&ds, &q, 3, &delta, 0).unwrap();
    assert_eq!(r.verdicts[0].value, ci(4));

    assert!(matches!(
        dihedral_congruence_check(&ds, &q, 1, &delta, 2),
        Err(Error::RangeError(_))
    ));
    let bad = vec![c(rat(1, 3)); 3];
    assert!(matches!(
        dihedral_congruence_check(&ds, &q, 1, &bad, 0),
        Err(Error::RangeError(_))
    ));
}

#[test]
fn u_psi_and_q_branches() {
    assert!(u_psi(&[]).unwrap().is_one());
    let m = Matrix::from_rows(vec![vec![ci(2)]], 1);
    assert_eq!(u_psi(std::slice::from_ref(&m)).unwrap(), c(rat(-1, 2)));
    assert_eq!(u_psi(&[m.clone(), m]).unwrap(), c(rat(1, 4)));
    assert!(u_psi(&[Matrix::<CycloElement>::identity(2)])
        .unwrap()
        .is_one());
    assert!(u_psi(&[Matrix::<CycloElement>::zeros(1, 1)]).is_err());

    let (s3, ds, _) = s3_data(rat(0, 1), rat(0, 1), rat(0, 1));
    let unit = QInputs {
        s_ram: 0,
        s_ram_split: 0,
        sqrt: ci(1),
        radicand: Some(rat_int(1)),
        l_value: ci(1),
        omega: ci(1),
        h: ci(1),
        u: None,
    };
    assert!(dihedral_q(&ds, 0, &unit).unwrap().is_one());
    let mut q = unit.clone();
    q.s_ram = 1;
    assert_eq!(dihedral_q(&ds, 0, &q).unwrap(), ci(-1));
    let eps = (0..3).find(|&c| ds.class(c) == PsiClass::Sign).unwrap();
    q.s_ram_split = 3;
    q.l_value = ci(6);
    q.h = ci(4);
    assert_eq!(dihedral_q(&ds, eps, &q).unwrap(), c(rat(-3, 2)));
    let rho = s3.character_index("rho").unwrap();
    assert!(matches!(
        dihedral_q(&ds, rho, &unit),
        Err(Error::IncompleteData(_))
    ));
    q.u = Some(c(rat(-1, 2)));
    assert_eq!(dihedral_q(&ds, rho, &q).unwrap(), c(rat(-3, 4)));

    // √5 = 1 + 2(ζ₅ + ζ₅⁴)
    let sqrt5 = &ci(1) + &(&ci(2) * &(&CycloElement::zeta(5, 1) + &CycloElement::zeta(5, 4)));
    let mut q = unit.clone();
    q.sqrt = sqrt5.clone();
    q.radicand = Some(rat_int(5));
    assert_eq!(dihedral_q(&ds, 0, &q).unwrap(), sqrt5);
    q.radicand = Some(rat_int(3));
    assert!(matches!(dihedral_q(&ds, 0, &q), Err(Error::RangeError(_))));
}

#[test]
fn h_f_psi_branches() {
    let (s3, ds, _) = s3_data(rat(0, 1), rat(0, 1), rat(0, 1));
    let eps = (0..3).find(|&c| ds.class(c) == PsiClass::Sign).unwrap();
    let rho = s3.character_index("rho").unwrap();
    assert!(h_f_psi(&ds, 0, 1, &[]).unwrap().is_one());
    assert!(h_f_psi(&ds, eps, 0, &[]).unwrap().is_one());

    let h0 = rat(5, 3);
    let mut pairing = vec![ci(0); 6];
    pairing[0] = c(h0.clone());
    // ρ(1)/6·Σ_g |ρ(g)|²·h0 = 2·h0
    assert_eq!(
        h_f_psi(&ds, rho, 0, &pairing).unwrap(),
        c(h0.clone() * rat_int(2))
    );
    // trivial character: Σ_g ⟨gQ, Q⟩
    let pairing: Vec<_> = (1..=6).map(ci).collect();
    assert_eq!(h_f_psi(&ds, 0, 0, &pairing).unwrap(), ci(21));
    assert!(matches!(
        h_f_psi(&ds, rho, 0, &pairing[..3]),
        Err(Error::ShapeError(_))
    ));
}

#[test]
fn classical_product_agrees_with_dihedral_element() {
    let s3 = builtin("S3").unwrap();
    let ds = DihedralStructure::new(&s3, 3).unwrap();
    let t = 2;
    let qv = [rat(1, 2), rat(3, 5), rat(-2, 7)];
    let lv = [rat(3, 1), rat(1, 4), rat(5, 2)];
    let om = [rat(2, 1), rat(7, 3), rat(1, 5)];
    let hv = [rat(11, 1), rat(1, 1), rat(2, 9)];
    let deg = |chi: usize| s3.degree(chi) as u32;
    let bridge: Vec<Rational> = (0..3)
        .map(|i| qv[i].clone() * om[i].clone() * hv[i].clone() / lv[i].clone())
        .collect();
    let ht: Vec<Rational> = (0..3)
        .map(|i| Rational::from_integer(t.into()).pow(2 * deg(i) as i32) / hv[i].clone())
        .collect();
    let inp = KeyProductInput {
        a: 1,
        d: 1,
        y: Some(GroupRingElement::one(6)),
        l_value: Some(CentralElement::from_rationals(lv.to_vec())),
        omega: Some(CentralElement::from_rationals(om.to_vec())),
        root_number: Some(s3.central_one()),
        height: Some(CentralElement::from_rationals(ht)),
        tau_star: Some(CentralElement::from_rationals(bridge)),
        varrho: Some(vec![]),
        ..Default::default()
    };
    for i_q in [0u8, 1] {
        let r = key_product(&s3, 3, &inp, KeyProductMode::ClassicalSelmer).unwrap();
        let sign = if i_q == 0 { ci(1) } else { ci(-1) };
        let factor = GroupRingElement::one(6).add(&GroupRingElement::basis(6, ds.tau).scale(&sign));
        let lhs = s3.group().gr_mul(&factor, &r.coefficients);
        let q: Vec<_> = qv.iter().cloned().map(c).collect();
        assert_eq!(lhs, dihedral_key_element(&ds, &q, t, i_q).unwrap());
    }
}
