//! Dense probability tables over small finite alphabets and exact
//! (conditional) mutual information.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a table or a conditional row.
pub const NORM_TOL: f64 = 1e-12;

/// A row-major table of non-negative numbers.
///
/// When used as a conditional distribution the leading `cond` axes index the
/// conditioning variables and every block over the remaining axes sums to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
}

impl Table {
    pub fn new(shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let t = Self { shape, values };
        t.check_layout()?;
        Ok(t)
    }

    /// Builds a table by evaluating `f` at every index tuple.
    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let total: usize = shape.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..total {
            values.push(f(&idx));
            increment(&mut idx, &shape);
        }
        Self { shape, values }
    }

    /// A point mass at `at`.
    pub fn point_mass(shape: Vec<usize>, at: &[usize]) -> Self {
        Self::from_fn(shape, |i| if i == at { 1.0 } else { 0.0 })
    }

    /// Uniform over all cells (a uniform joint, or uniform rows).
    pub fn uniform(shape: Vec<usize>, cond: usize) -> Self {
        let row: usize = shape[cond..].iter().product();
        Self::from_fn(shape, |_| 1.0 / row as f64)
    }

    fn check_layout(&self) -> Result<()> {
        if self.shape.is_empty() || self.shape.contains(&0) {
            return Err(Error::Dimension(format!("invalid table shape {:?}", self.shape)));
        }
        let total: usize = self.shape.iter().product();
        if total != self.values.len() {
            return Err(Error::Dimension(format!(
                "shape {:?} needs {} values, got {}",
                self.shape,
                total,
                self.values.len()
            )));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::invalid("Table", format!("entry {v} is not a probability")));
        }
        Ok(())
    }

    /// Checks that every block over the trailing axes after the first
    /// `cond` axes sums to one.
    pub fn validate_conditional(&self, cond: usize, what: &'static str) -> Result<()> {
        self.check_layout()?;
        if cond >= self.shape.len() {
            return Err(Error::Dimension(format!(
                "{what}: table of rank {} cannot have {cond} conditioning axes",
                self.shape.len()
            )));
        }
        let row: usize = self.shape[cond..].iter().product();
        for (i, block) in self.values.chunks(row).enumerate() {
            let s: f64 = block.iter().sum();
            if (s - 1.0).abs() > NORM_TOL {
                return Err(Error::invalid(
                    what,
                    format!("row {i} sums to {s}, expected 1 within {NORM_TOL}"),
                ));
            }
        }
        Ok(())
    }

    /// Value at a multi-index.
    #[inline]
    pub fn at(&self, idx: &[usize]) -> f64 {
        let mut flat = 0;
        for (i, &n) in idx.iter().zip(&self.shape) {
            flat = flat * n + i;
        }
        self.values[flat]
    }
}

fn increment(idx: &mut [usize], shape: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return;
        }
        idx[k] = 0;
    }
}

/// A normalized joint distribution over a tuple of finite variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    table: Table,
}

impl JointPmf {
    pub fn new(table: Table) -> Result<Self> {
        table.check_layout()?;
        let s: f64 = table.values.iter().sum();
        if (s - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(
                "JointPmf",
                format!("total mass {s}, expected 1 within {NORM_TOL}"),
            ));
        }
        Ok(Self { table })
    }

    pub fn from_fn(shape: Vec<usize>, f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        Self::new(Table::from_fn(shape, f))
    }

    pub fn dims(&self) -> &[usize] {
        &self.table.shape
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    /// Marginal over `vars`, with axes in the order given.
    pub fn marginal(&self, vars: &[usize]) -> Table {
        let dims = &self.table.shape;
        let shape: Vec<usize> = vars.iter().map(|&v| dims[v]).collect();
        let size: usize = shape.iter().product();
        let mut out = vec![0.0; size];
        let mut idx = vec![0usize; dims.len()];
        for &p in &self.table.values {
            if p != 0.0 {
                let mut flat = 0;
                for &v in vars {
                    flat = flat * dims[v] + idx[v];
                }
                out[flat] += p;
            }
            increment(&mut idx, dims);
        }
        Table {
            shape: if shape.is_empty() { vec![1] } else { shape },
            values: out,
        }
    }
}

/// `I(A; B | C)` in bits for disjoint variable groups of `joint`.
///
/// An empty `cond` gives the unconditional mutual information.
pub fn mutual_information(joint: &JointPmf, a: &[usize], b: &[usize], cond: &[usize]) -> Result<f64> {
    let rank = joint.dims().len();
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("mutual information needs two non-empty groups"));
    }
    let mut seen = vec![false; rank];
    for &v in a.iter().chain(b).chain(cond) {
        if v >= rank {
            return Err(Error::Dimension(format!("variable {v} out of range for rank {rank}")));
        }
        if seen[v] {
            return Err(Error::invalid("variable groups", format!("variable {v} repeated")));
        }
        seen[v] = true;
    }

    let abc: Vec<usize> = a.iter().chain(b).chain(cond).copied().collect();
    let ac: Vec<usize> = a.iter().chain(cond).copied().collect();
    let bc: Vec<usize> = b.iter().chain(cond).copied().collect();
    let m_abc = joint.marginal(&abc);
    let m_ac = joint.marginal(&ac);
    let m_bc = joint.marginal(&bc);
    let m_c = joint.marginal(cond);

    let da: usize = a.iter().map(|&v| joint.dims()[v]).product();
    let db: usize = b.iter().map(|&v| joint.dims()[v]).product();
    let dc: usize = cond.iter().map(|&v| joint.dims()[v]).product();

    let mut total = 0.0;
    for ia in 0..da {
        for ib in 0..db {
            for ic in 0..dc {
                let p = m_abc.values[(ia * db + ib) * dc + ic];
                if p == 0.0 {
                    continue;
                }
                let pac = m_ac.values[ia * dc + ic];
                let pbc = m_bc.values[ib * dc + ic];
                let pc = m_c.values[ic];
                if pac == 0.0 || pbc == 0.0 {
                    return Err(Error::invalid(
                        "JointPmf",
                        "positive mass on a zero-probability marginal",
                    ));
                }
                total += p * (p * pc / (pac * pbc)).log2();
            }
        }
    }
    Ok(total.max(0.0))
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    h(p) + h(1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(f: impl Fn(usize, usize) -> f64) -> JointPmf {
        JointPmf::from_fn(vec![2, 2], |i| f(i[0], i[1])).unwrap()
    }

    #[test]
    fn mi_examples() {
        let indep = pair(|_, _| 0.25);
        assert_eq!(mutual_information(&indep, &[0], &[1], &[]).unwrap(), 0.0);

        let copy = pair(|a, b| if a == b { 0.5 } else { 0.0 });
        assert!((mutual_information(&copy, &[0], &[1], &[]).unwrap() - 1.0).abs() < 1e-15);

        let e = 0.11;
        let bsc = pair(|a, b| 0.5 * if a == b { 1.0 - e } else { e });
        let mi = mutual_information(&bsc, &[0], &[1], &[]).unwrap();
        assert!((mi - (1.0 - binary_entropy(e))).abs() < 1e-14);
        assert!((mi - 0.500084).abs() < 1e-6);
    }

    #[test]
    fn conditional_mi_of_xor() {
        // Z = X xor Y with X, Y uniform: I(X;Z) = 0 but I(X;Z|Y) = 1.
        let j = JointPmf::from_fn(vec![2, 2, 2], |i| if i[2] == i[0] ^ i[1] { 0.25 } else { 0.0 })
            .unwrap();
        assert!(mutual_information(&j, &[0], &[2], &[]).unwrap().abs() < 1e-15);
        assert!((mutual_information(&j, &[0], &[2], &[1]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(JointPmf::new(Table::new(vec![2], vec![0.5, 0.4]).unwrap()).is_err());
        assert!(Table::new(vec![2], vec![0.5, 0.5, 0.0]).is_err());
        assert!(Table::new(vec![2], vec![1.5, -0.5]).is_err());
        let j = pair(|_, _| 0.25);
        assert!(mutual_information(&j, &[0], &[0], &[]).is_err());
        assert!(mutual_information(&j, &[0], &[2], &[]).is_err());
        assert!(mutual_information(&j, &[], &[1], &[]).is_err());
    }

    #[test]
    fn conditional_rows() {
        let t = Table::new(vec![2, 2], vec![0.3, 0.7, 1.0, 0.0]).unwrap();
        assert!(t.validate_conditional(1, "t").is_ok());
        assert!(t.validate_conditional(0, "t").is_err());
        assert_eq!(t.at(&[1, 0]), 1.0);
    }
}
