//! Seeded random instances: allocations for the Gaussian schemes and
//! probability tables for the discrete channel.

use rand::Rng;

use crate::channel::{DfAllocation, PdfAllocation, PowerBudget, TimeSlots};
use crate::dmc::{PdfInputDistribution, SlotChannels};
use crate::optimizer::{decode_df, decode_pdf, DF_DIM, PDF_DIM};
use crate::pmf::Table;

/// A point of the flat Dirichlet distribution on `k` atoms.
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// A table whose blocks over the axes after the first `cond` are
/// independent flat-Dirichlet draws.
pub fn random_table<R: Rng + ?Sized>(rng: &mut R, shape: Vec<usize>, cond: usize) -> Table {
    let row: usize = shape[cond..].iter().product();
    let rows: usize = shape[..cond].iter().product();
    let values = (0..rows).flat_map(|_| dirichlet(rng, row)).collect();
    Table { shape, values }
}

/// Search coordinates with the slot pair uniform on the simplex and every
/// other fraction uniform on `[0, 1]`.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    let s = dirichlet(rng, 3);
    let mut x = vec![s[0], s[1]];
    x.extend((2..dim).map(|_| rng.random::<f64>()));
    x
}

/// A random partial decode-forward operating point that uses the whole budget.
pub fn random_pdf_point<R: Rng + ?Sized>(
    rng: &mut R,
    budget: &PowerBudget,
) -> (TimeSlots, PdfAllocation) {
    decode_pdf(&random_params(rng, PDF_DIM), budget)
}

/// A random decode-forward operating point that uses the whole budget.
pub fn random_df_point<R: Rng + ?Sized>(
    rng: &mut R,
    budget: &PowerBudget,
) -> (TimeSlots, DfAllocation) {
    decode_df(&random_params(rng, DF_DIM), budget)
}

/// Random slot channels with every alphabet of size `n`.
pub fn random_slot_channels<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SlotChannels {
    SlotChannels {
        slot1: random_table(rng, vec![n, n, n], 1),
        slot2: random_table(rng, vec![n, n, n], 1),
        slot3: random_table(rng, vec![n, n, n], 2),
    }
}

/// A random partial decode-forward input distribution with every alphabet
/// (auxiliaries included) of size `n`.
pub fn random_pdf_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PdfInputDistribution {
    PdfInputDistribution {
        pmf_x10_u: random_table(rng, vec![n, n], 0),
        pmf_x20_v: random_table(rng, vec![n, n], 0),
        pmf_x13_given_uv: random_table(rng, vec![n, n, n], 2),
        pmf_x23_given_uv: random_table(rng, vec![n, n, n], 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dirichlet_is_normalized_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let x = dirichlet(&mut a, 5);
        assert_eq!(x, dirichlet(&mut b, 5));
        assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(x.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn random_instances_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ch = random_slot_channels(&mut rng, 2);
        ch.validate().unwrap();
        random_pdf_distribution(&mut rng, 2).validate(&ch).unwrap();
        let (s, _) = random_pdf_point(&mut rng, &PowerBudget::new(1.0, 1.0).unwrap());
        s.validate().unwrap();
    }
}
