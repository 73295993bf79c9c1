use super::*;
use crate::group_algebra::builtin;
use crate::synth::{random_element, SynthRng};

fn flat(ga: &GroupAlgebra, v: &[GroupRingElement]) -> Vec<Rational> {
    ga.group().flatten(v).unwrap()
}

fn el(ga: &GroupAlgebra, c: &[i64]) -> GroupRingElement {
    let mut v = c.to_vec();
    v.resize(ga.order(), 0);
    GroupRingElement::from_ints(&v)
}

fn random_homs(
    ga: &GroupAlgebra,
    r: &mut SynthRng,
    count: usize,
    rank: usize,
) -> Vec<EquivariantHom> {
    (0..count)
        .map(|_| {
            let cols: Vec<_> = (0..rank).map(|_| random_element(ga, r, 3)).collect();
            EquivariantHom::from_columns(ga.group(), 3, &cols).unwrap()
        })
        .collect()
}

fn random_tuple(
    ga: &GroupAlgebra,
    r: &mut SynthRng,
    count: usize,
    rank: usize,
) -> Vec<Vec<Rational>> {
    (0..count)
        .map(|_| {
            let v: Vec<_> = (0..rank).map(|_| random_element(ga, r, 3)).collect();
            flat(ga, &v)
        })
        .collect()
}

fn standard_frame(ga: &Arc<GroupAlgebra>, rank: usize) -> Arc<WedgeFrame> {
    let n = ga.order();
    let basis = (0..rank)
        .map(|k| {
            let mut v = vec![Rational::from_integer(0.into()); rank * n];
            v[k * n] = Rational::from_integer(1.into());
            v
        })
        .collect();
    Arc::new(WedgeFrame::new(ga, rank, vec![true; ga.num_chars()], basis, &[]).unwrap())
}

#[test]
fn pairing_examples() {
    let ga = builtin("C2").unwrap();
    let id = EquivariantHom::from_columns(ga.group(), 3, &[GroupRingElement::one(2)]).unwrap();
    let v = wedge_pairing(&ga, &[flat(&ga, &[el(&ga, &[1, 1])])], &[id]).unwrap();
    assert_eq!(v, CentralElement::from_ints(&[2, 0]));

    let ga = builtin("S3").unwrap();
    let n = ga.order();
    let duals: Vec<_> = (0..2)
        .map(|i| {
            let cols: Vec<_> = (0..2)
                .map(|k| {
                    if k == i {
                        GroupRingElement::one(n)
                    } else {
                        GroupRingElement::zero(n)
                    }
                })
                .collect();
            EquivariantHom::from_columns(ga.group(), 3, &cols).unwrap()
        })
        .collect();
    let f = standard_frame(&ga, 2);
    assert!(wedge_pairing(&ga, f.basis(), &duals).unwrap().is_one());
    assert!(matches!(
        wedge_pairing(&ga, &f.basis()[..1], &duals),
        Err(Error::ShapeError(_))
    ));
}

fn classical_det(ga: &GroupAlgebra, m: &GrMatrix) -> GroupRingElement {
    let g = ga.group();
    match m.rows() {
        1 => m[(0, 0)].clone(),
        2 => g
            .gr_mul(&m[(0, 0)], &m[(1, 1)])
            .sub(&g.gr_mul(&m[(0, 1)], &m[(1, 0)])),
        _ => unreachable!(),
    }
}

#[test]
fn abelian_pairing_is_gram_determinant() {
    let mut r = rng(2);
    for name in ["C3", "C2xC2", "C4"] {
        let ga = builtin(name).unwrap();
        for _ in 0..5 {
            let tuple = random_tuple(&ga, &mut r, 2, 3);
            let phis = random_homs(&ga, &mut r, 2, 3);
            let gram = Matrix::from_fn(2, 2, |i, j| phis[i].eval(&tuple[j]));
            let det = classical_det(&ga, &gram);
            assert_eq!(
                wedge_pairing(&ga, &tuple, &phis).unwrap(),
                ga.character_values(&det)
            );
        }
    }
}

#[test]
fn coordinate_examples() {
    let ga = builtin("C1").unwrap();
    let f = standard_frame(&ga, 1);
    let w = wedge_coordinates(&[flat(&ga, &[el(&ga, &[3])])], &f).unwrap();
    assert_eq!(w.coords, CentralElement::from_ints(&[3]));

    let ga = builtin("S3").unwrap();
    let f = standard_frame(&ga, 2);
    assert!(wedge_coordinates(f.basis(), &f).unwrap().coords.is_one());
    let mut r = rng(3);
    let x = random_tuple(&ga, &mut r, 1, 2).remove(0);
    let w = wedge_coordinates(&[x.clone(), x], &f).unwrap();
    assert!(w.coords.is_zero());
}

#[test]
fn two_routes_agree() {
    let mut r = rng(5);
    for name in ["S3", "Q8", "D4"] {
        let ga = builtin(name).unwrap();
        for rank in 1..=2 {
            let f = standard_frame(&ga, rank);
            for _ in 0..3 {
                let tuple = random_tuple(&ga, &mut r, rank, rank);
                let phis = random_homs(&ga, &mut r, rank, rank);
                let direct = wedge_pairing(&ga, &tuple, &phis).unwrap();
                let coords = wedge_coordinates(&tuple, &f).unwrap();
                assert_eq!(coords.pair(&phis).unwrap(), direct);
            }
        }
    }
}

#[test]
fn antisymmetry_and_scalars() {
    let ga = builtin("S3").unwrap();
    let mut r = rng(7);
    let f = standard_frame(&ga, 2);
    let tuple = random_tuple(&ga, &mut r, 2, 2);
    let a = wedge_coordinates(&tuple, &f).unwrap().coords;
    let swapped = vec![tuple[1].clone(), tuple[0].clone()];
    let b = wedge_coordinates(&swapped, &f).unwrap().coords;
    for chi in 0..ga.num_chars() {
        let sign = if ga.degree(chi) % 2 == 1 {
            -a.comp(chi)
        } else {
            a.comp(chi).clone()
        };
        assert_eq!(b.comp(chi), &sign);
    }

    let c = CentralElement::from_ints(&[2, 3, 5]);
    let cx = ga.to_group_ring(&c);
    let n = ga.order();
    let mut scaled = tuple.clone();
    let parts = ga.group().unflatten::<Rational>(&tuple[0]);
    let parts: Vec<_> = parts.iter().map(|y| ga.group().gr_mul(&cx, y)).collect();
    scaled[0] = flat(&ga, &parts);
    assert_eq!(scaled[0].len(), 2 * n);
    let s = wedge_coordinates(&scaled, &f).unwrap().coords;
    for chi in 0..ga.num_chars() {
        let factor = c.comp(chi).pow(ga.degree(chi) as u32);
        assert_eq!(s.comp(chi), &(a.comp(chi) * &factor));
    }
}

#[test]
fn transport() {
    let ga = builtin("C1").unwrap();
    let f = standard_frame(&ga, 1);
    let w = wedge_coordinates(&[flat(&ga, &[el(&ga, &[2])])], &f).unwrap();
    let five = Matrix::from_rows(vec![vec![el(&ga, &[5])]], 1);
    let t = transport_wedge(&w, &five, &f, Direction::Forward).unwrap();
    assert_eq!(t.coords, CentralElement::from_ints(&[10]));
    let back = transport_wedge(&t, &five, &f, Direction::Inverse).unwrap();
    assert_eq!(back.coords, w.coords);
    let id = transport_wedge(&w, &ga.gr_identity(1), &f, Direction::Forward).unwrap();
    assert_eq!(id.coords, w.coords);
    let zero = ga.gr_zeros(1, 1);
    assert!(matches!(
        transport_wedge(&w, &zero, &f, Direction::Forward),
        Err(Error::SingularTransport(0))
    ));

    let ga = builtin("S3").unwrap();
    let mut r = rng(1);
    let f = standard_frame(&ga, 2);
    let w = wedge_coordinates(&random_tuple(&ga, &mut r, 2, 2), &f).unwrap();
    let u = crate::synth::random_unimodular(&ga, &mut r, 2, 4);
    let there = transport_wedge(&w, &u, &f, Direction::Forward).unwrap();
    let back = transport_wedge(&there, &u, &f, Direction::Inverse).unwrap();
    assert_eq!(back.coords, w.coords);
}

#[test]
fn quotient_frames() {
    // M = ℚ[C2]/(1 − σ) is free of rank 1 on the trivial component only
    let ga = builtin("C2").unwrap();
    let rel = vec![flat(&ga, &[el(&ga, &[1, -1])])];
    let one = flat(&ga, &[el(&ga, &[1])]);
    let f = Arc::new(WedgeFrame::new(&ga, 1, vec![true, false], vec![one.clone()], &rel).unwrap());
    let w = wedge_coordinates(&[flat(&ga, &[el(&ga, &[0, 3])])], &f).unwrap();
    assert_eq!(w.coords, CentralElement::from_ints(&[3, 0]));
    assert!(matches!(
        WedgeFrame::new(&ga, 1, vec![true, true], vec![one], &rel),
        Err(Error::NotFree(_))
    ));
}

#[test]
fn frame_search() {
    let ga = builtin("S3").unwrap();
    let gens = Matrix::<Rational>::identity(2 * ga.order());
    let f = WedgeFrame::search(&ga, 2, vec![true; 3], 2, &gens, &[], 4).unwrap();
    assert_eq!(f.rank(), 2);
    assert!(matches!(
        WedgeFrame::search(&ga, 2, vec![true; 3], 1, &gens, &[], 4),
        Err(Error::NotFree(_))
    ));
}
