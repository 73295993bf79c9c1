use crate::error::{Error, Result};
use num_integer::Integer;

/// Finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupData {
    pub name: String,
    order: usize,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    classes: Vec<Vec<usize>>,
    exponent: u64,
    labels: Vec<String>,
    class_of: Vec<usize>,
}

impl GroupData {
    /// Builds a group from its table, deriving inverses, classes and exponent.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        check_table(&table)?;
        let inverses = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g][h] == 0)
                    .expect("group element has an inverse")
            })
            .collect::<Vec<_>>();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|h| table[table[h][g]][inverses[h]]).collect();
            cls.sort_unstable();
            cls.dedup();
            for &c in &cls {
                class_of[c] = classes.len();
            }
            classes.push(cls);
        }
        let mut exponent = 1u64;
        for g in 0..n {
            exponent = exponent.lcm(&(element_order(&table, g) as u64));
        }
        let labels = (0..n).map(|g| format!("g{g}")).collect();
        Ok(GroupData {
            name: name.into(),
            order: n,
            table,
            inverses,
            classes,
            exponent,
            labels,
            class_of,
        })
    }

    /// Builds a group from fully specified data, checking every field against the table.
    pub fn from_parts(
        name: &str,
        table: Vec<Vec<usize>>,
        inverses: Vec<usize>,
        classes: Vec<Vec<usize>>,
        exponent: u64,
    ) -> Result<Self> {
        let g = GroupData::from_table(name, table)?;
        if inverses != g.inverses {
            return Err(Error::InvalidRepresentation(
                "inverse table does not match multiplication table".into(),
            ));
        }
        let mut given: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        given.sort();
        let mut derived = g.classes.clone();
        derived.sort();
        if given != derived {
            return Err(Error::InvalidRepresentation(
                "conjugacy classes do not match multiplication table".into(),
            ));
        }
        if exponent != g.exponent {
            return Err(Error::InvalidRepresentation(format!(
                "exponent {exponent} does not match table (expected {})",
                g.exponent
            )));
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = labels;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_order(&self, g: usize) -> usize {
        element_order(&self.table, g)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.table[g][h] == self.table[h][g]))
    }
}

fn element_order(table: &[Vec<usize>], g: usize) -> usize {
    let mut k = 1;
    let mut x = g;
    while x != 0 {
        x = table[x][g];
        k += 1;
    }
    k
}

fn check_table(table: &[Vec<usize>]) -> Result<()> {
    let n = table.len();
    let bad = |s: String| Err(Error::InvalidRepresentation(s));
    if n == 0 {
        return bad("empty group".into());
    }
    for (g, row) in table.iter().enumerate() {
        if row.len() != n {
            return bad(format!("row {g} has length {}", row.len()));
        }
        let mut seen = vec![false; n];
        for &h in row {
            if h >= n || seen[h] {
                return bad(format!("row {g} is not a permutation"));
            }
            seen[h] = true;
        }
        if row[0] != g || table[0][g] != g {
            return bad(format!("element 0 is not the identity at {g}"));
        }
    }
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                if table[table[g][h]][k] != table[g][table[h][k]] {
                    return bad(format!("associativity fails at ({g},{h},{k})"));
                }
            }
        }
    }
    Ok(())
}
