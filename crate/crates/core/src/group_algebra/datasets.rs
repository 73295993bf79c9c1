//! Built-in groups with explicit irreducible representations.
//!
//! Each dataset lists generator images in every irreducible representation. The group
//! is the closure of the generator tuples (a faithful representation, since the
//! regular representation contains every irreducible one).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::CycloElement;

use super::{GroupAlgebra, GroupData, IrrepData};

pub const BUILTIN_GROUPS: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C2xC2", "S3", "D4", "D5", "Q8", "A4",
];

type Mat = Matrix<CycloElement>;

fn m(rows: Vec<Vec<CycloElement>>) -> Mat {
    Matrix::from_rows(rows, 0)
}

fn int(n: i64) -> CycloElement {
    CycloElement::from_int(n)
}

fn scalar(c: CycloElement) -> Mat {
    Matrix::new(1, 1, vec![c])
}

fn z(mm: u64, k: i64) -> CycloElement {
    CycloElement::zeta(mm, k)
}

struct Dataset {
    name: String,
    generators: Vec<&'static str>,
    /// (label, images of the generators)
    irreps: Vec<(String, Vec<Mat>)>,
    order: usize,
}

fn dataset(name: &str) -> Option<Dataset> {
    let d = match name {
        "C1" => Dataset {
            name: "C1".into(),
            generators: vec![],
            irreps: vec![("1".into(), vec![])],
            order: 1,
        },
        "C2" | "C3" | "C4" | "C5" | "C6" => {
            let n: u64 = name[1..].parse().ok()?;
            let irreps = (0..n as i64)
                .map(|j| (format!("chi{j}"), vec![scalar(z(n, j))]))
                .collect();
            Dataset {
                name: name.into(),
                generators: vec!["c"],
                irreps,
                order: n as usize,
            }
        }
        "C2xC2" => {
            let mut irreps = Vec::new();
            for (s, t) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
                irreps.push((
                    format!("chi({s},{t})"),
                    vec![scalar(int(s)), scalar(int(t))],
                ));
            }
            Dataset {
                name: name.into(),
                generators: vec!["a", "b"],
                irreps,
                order: 4,
            }
        }
        "S3" => Dataset {
            name: name.into(),
            generators: vec!["s", "r"],
            irreps: vec![
                ("1".into(), vec![scalar(int(1)), scalar(int(1))]),
                ("sgn".into(), vec![scalar(int(-1)), scalar(int(1))]),
                (
                    "rho".into(),
                    vec![
                        m(vec![vec![int(0), int(1)], vec![int(1), int(0)]]),
                        m(vec![vec![int(0), int(-1)], vec![int(1), int(-1)]]),
                    ],
                ),
            ],
            order: 6,
        },
        "D4" => {
            let mut irreps = Vec::new();
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                irreps.push((
                    format!("chi({a},{b})"),
                    vec![scalar(int(a)), scalar(int(b))],
                ));
            }
            irreps.push((
                "rho".into(),
                vec![
                    m(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]),
                    m(vec![vec![int(1), int(0)], vec![int(0), int(-1)]]),
                ],
            ));
            Dataset {
                name: name.into(),
                generators: vec!["r", "s"],
                irreps,
                order: 8,
            }
        }
        "D5" => {
            let swap = m(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
            let mut irreps = vec![
                ("1".into(), vec![scalar(int(1)), scalar(int(1))]),
                ("sgn".into(), vec![scalar(int(1)), scalar(int(-1))]),
            ];
            for k in 1..=2 {
                irreps.push((
                    format!("rho{k}"),
                    vec![
                        m(vec![vec![z(5, k), int(0)], vec![int(0), z(5, -k)]]),
                        swap.clone(),
                    ],
                ));
            }
            Dataset {
                name: name.into(),
                generators: vec!["r", "s"],
                irreps,
                order: 10,
            }
        }
        "Q8" => {
            let mut irreps = Vec::new();
            for (a, b) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
                irreps.push((
                    format!("chi({a},{b})"),
                    vec![scalar(int(a)), scalar(int(b))],
                ));
            }
            irreps.push((
                "rho".into(),
                vec![
                    m(vec![vec![z(4, 1), int(0)], vec![int(0), z(4, -1)]]),
                    m(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]),
                ],
            ));
            Dataset {
                name: name.into(),
                generators: vec!["i", "j"],
                irreps,
                order: 8,
            }
        }
        "A4" => {
            let mut irreps = Vec::new();
            for k in 0..3 {
                irreps.push((format!("chi{k}"), vec![scalar(int(1)), scalar(z(3, k))]));
            }
            irreps.push((
                "rho".into(),
                vec![
                    m(vec![
                        vec![int(1), int(0), int(0)],
                        vec![int(0), int(-1), int(0)],
                        vec![int(0), int(0), int(-1)],
                    ]),
                    m(vec![
                        vec![int(0), int(1), int(0)],
                        vec![int(0), int(0), int(1)],
                        vec![int(1), int(0), int(0)],
                    ]),
                ],
            ));
            Dataset {
                name: name.into(),
                generators: vec!["a", "b"],
                irreps,
                order: 12,
            }
        }
        _ => return None,
    };
    Some(d)
}

fn word_label(word: &[usize], gens: &[&str]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        let k = j - i;
        out.push(if k == 1 {
            gens[word[i]].to_string()
        } else {
            format!("{}^{k}", gens[word[i]])
        });
        i = j;
    }
    out.join("")
}

fn build(d: Dataset) -> Result<GroupAlgebra> {
    let degrees: Vec<usize> = d
        .irreps
        .iter()
        .map(|(_, imgs)| imgs.first().map(|x| x.rows()).unwrap_or(1))
        .collect();
    let ident: Vec<Mat> = degrees.iter().map(|&k| Matrix::identity(k)).collect();
    let mut elems: Vec<Vec<Mat>> = vec![ident];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut head = 0;
    while head < elems.len() {
        for gi in 0..d.generators.len() {
            let next: Vec<Mat> = d
                .irreps
                .iter()
                .zip(&elems[head])
                .map(|((_, imgs), e)| e.mul(&imgs[gi]))
                .collect();
            if !elems.contains(&next) {
                let mut w = words[head].clone();
                w.push(gi);
                elems.push(next);
                words.push(w);
                if elems.len() > 24 {
                    return Err(Error::InvalidRepresentation(format!(
                        "{}: closure exceeds order 24",
                        d.name
                    )));
                }
            }
        }
        head += 1;
    }
    if elems.len() != d.order {
        return Err(Error::InvalidRepresentation(format!(
            "{}: generators produce {} elements, expected {}",
            d.name,
            elems.len(),
            d.order
        )));
    }
    let n = elems.len();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let prod: Vec<Mat> = elems[a]
                        .iter()
                        .zip(&elems[b])
                        .map(|(x, y)| x.mul(y))
                        .collect();
                    elems
                        .iter()
                        .position(|e| *e == prod)
                        .expect("closed under products")
                })
                .collect()
        })
        .collect();
    let labels = words.iter().map(|w| word_label(w, &d.generators)).collect();
    let group = GroupData::from_table(&d.name, table)?.with_labels(labels);
    let irreps = d
        .irreps
        .iter()
        .enumerate()
        .map(|(i, (label, _))| IrrepData {
            label: label.clone(),
            degree: degrees[i],
            matrices: elems.iter().map(|e| e[i].clone()).collect(),
        })
        .collect();
    GroupAlgebra::new(group, irreps)
}

/// One of the shipped groups: C1..C6, C2xC2, S3, D4, D5, Q8, A4.
pub fn builtin(name: &str) -> Result<Arc<GroupAlgebra>> {
    let d = dataset(name).ok_or_else(|| Error::Parse {
        field: "group".into(),
        detail: format!("unknown builtin group {name:?}"),
    })?;
    Ok(Arc::new(build(d)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn all_builtins_validate() {
        for name in BUILTIN_GROUPS {
            let ga = builtin(name).unwrap();
            let sq: usize = (0..ga.num_chars()).map(|c| ga.degree(c).pow(2)).sum();
            assert_eq!(sq, ga.order(), "{name}");
            assert_eq!(ga.label(0), ga.irreps()[0].label);
            assert!(
                ga.character(0).iter().all(|x| x.is_one()),
                "{name}: trivial character first"
            );
        }
    }

    #[test]
    fn orders_and_exponents() {
        let expect = [
            ("C6", 6, 6),
            ("C2xC2", 4, 2),
            ("S3", 6, 6),
            ("D4", 8, 4),
            ("D5", 10, 10),
            ("Q8", 8, 4),
            ("A4", 12, 6),
        ];
        for (name, n, e) in expect {
            let ga = builtin(name).unwrap();
            assert_eq!((ga.order(), ga.group().exponent()), (n, e), "{name}");
        }
        assert!(!builtin("Q8").unwrap().is_abelian());
        assert!(builtin("C2xC2").unwrap().is_abelian());
    }

    #[test]
    fn s3_character_values() {
        let ga = builtin("S3").unwrap();
        let g = ga.group();
        let rho = ga.character_index("rho").unwrap();
        for x in 0..6 {
            let expect = match g.element_order(x) {
                1 => 2,
                2 => 0,
                _ => -1,
            };
            assert_eq!(ga.character(rho)[x], CycloElement::from_int(expect));
        }
        // e_rho = (1/3)(2 - c - c^2)
        let e = ga.idempotent_element(rho);
        for x in 0..6 {
            let expect = match g.element_order(x) {
                1 => rat(2, 3),
                2 => rat(0, 1),
                _ => rat(-1, 3),
            };
            assert_eq!(*e.coeff(x), CycloElement::from(expect));
        }
    }

    #[test]
    fn negated_transposition_is_rejected() {
        let ga = builtin("S3").unwrap();
        let mut irreps = ga.irreps().to_vec();
        let tau = (0..6).find(|&g| ga.group().element_order(g) == 2).unwrap();
        irreps[2].matrices[tau] = irreps[2].matrices[tau].scale(&CycloElement::from_int(-1));
        let err = GroupAlgebra::new(ga.group().clone(), irreps).unwrap_err();
        assert!(
            matches!(err, Error::InvalidRepresentation(ref s) if s.contains("pair")),
            "{err}"
        );
    }

    #[test]
    fn c2_characters_valid() {
        let ga = builtin("C2").unwrap();
        assert_eq!(ga.character(1)[1], CycloElement::from_int(-1));
        assert!(crate::group_algebra::validate_irreps(ga.group(), ga.irreps()).is_ok());
    }

    #[test]
    fn galois_orbits() {
        assert_eq!(builtin("C3").unwrap().orbits().len(), 2);
        assert_eq!(builtin("C4").unwrap().orbits().len(), 3);
        assert_eq!(builtin("D5").unwrap().orbits().len(), 3);
        assert_eq!(builtin("Q8").unwrap().orbits().len(), 5);
        assert_eq!(builtin("A4").unwrap().orbits().len(), 3);
    }
}
