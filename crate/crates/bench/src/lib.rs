//! Shared fixtures for the benchmark targets.

use ricci_homog::data::{derive_structure, InvariantMetric, InvariantTensor, StructureData};
use ricci_homog::testkit::{random_metric, random_structure, TestRng};
use ricci_homog::{catalog, Gamma};

pub fn flag() -> StructureData {
    derive_structure(&catalog::su3_flag()).expect("flag table derives")
}

pub fn grouped_flag() -> StructureData {
    derive_structure(&catalog::su3_flag_grouped()).expect("grouped table derives")
}

pub fn synthetic(s: usize) -> (StructureData, InvariantMetric, InvariantTensor) {
    let mut rng = TestRng::new(s as u64);
    let sd = random_structure(&mut rng, s, true);
    let x = random_metric(&mut rng, s, 0.2, 5.0);
    let z = InvariantTensor::new((0..s).map(|_| rng.range(0.1, 1.0)).collect()).unwrap();
    (sd, x, z)
}

/// Dense all-positive data at the enumeration guard's practical ceiling.
pub fn wide_instance(s: usize) -> StructureData {
    let mut rng = TestRng::new(0xbe);
    let mut gamma = Gamma::zeros(s);
    for i in 0..s {
        for k in i..s {
            for l in k..s {
                gamma.set(i, k, l, rng.range(0.05, 1.5));
            }
        }
    }
    let dims = vec![2usize; s];
    let killing: Vec<f64> = (0..s).map(|i| gamma.row_sum(i) / dims[i] as f64).collect();
    StructureData::new("wide", dims, killing, gamma, None).unwrap()
}
