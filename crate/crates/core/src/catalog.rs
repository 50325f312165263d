//! Bundled example bracket tables.
//!
//! Small, exactly reproducible tables used by the command-line examples and
//! the test suites. Bases are orthonormal for the background product; where a
//! Killing form exists the product is its negative (suitably scaled per
//! simple factor).

use crate::data::LieAlgebraTable;

/// Fully antisymmetric extension: for a base triple `(a, b, e)` with value
/// `v`, emit the three entries with ascending first pair.
fn antisym_entries(base: &[(usize, usize, usize, f64)]) -> Vec<(usize, usize, usize, f64)> {
    let mut out = Vec::with_capacity(base.len() * 3);
    for &(a, b, e, v) in base {
        out.push((a, b, e, v));
        out.push((a, e, b, -v));
        out.push((b, e, a, v));
    }
    out.sort_by_key(|&(a, b, e, _)| (a, b, e));
    out
}

fn su2_base(offset: usize, scale: f64) -> Vec<(usize, usize, usize, f64)> {
    let c = 1.0 / scale.sqrt();
    vec![(offset, offset + 1, offset + 2, c)]
}

/// `su(2)` with the product `-B`; one summand, trivial isotropy.
pub fn su2() -> LieAlgebraTable {
    let entries = antisym_entries(&su2_base(0, 2.0));
    LieAlgebraTable::from_entries(3, &entries, vec![], vec![vec![0, 1, 2]]).unwrap()
}

/// Flat 3-torus: abelian algebra, three one-dimensional summands.
pub fn torus3() -> LieAlgebraTable {
    LieAlgebraTable::from_entries(3, &[], vec![], vec![vec![0], vec![1], vec![2]]).unwrap()
}

/// `su(2) + su(2)` with the maximal torus as isotropy (a product of two
/// 2-spheres). All triple products vanish: every invariant metric has the
/// same Ricci tensor.
pub fn s2xs2() -> LieAlgebraTable {
    let mut base = su2_base(0, 2.0);
    base.extend(su2_base(3, 2.0));
    let entries = antisym_entries(&base);
    LieAlgebraTable::from_entries(6, &entries, vec![2, 5], vec![vec![0, 1], vec![3, 4]]).unwrap()
}

fn su3_base() -> Vec<(usize, usize, usize, f64)> {
    let s3 = 3.0_f64.sqrt();
    // antisymmetric structure constants of su(3) in the standard basis,
    // rescaled so the basis is orthonormal for -B
    let f: [(usize, usize, usize, f64); 9] = [
        (1, 2, 3, 1.0),
        (1, 4, 7, 0.5),
        (1, 5, 6, -0.5),
        (2, 4, 6, 0.5),
        (2, 5, 7, 0.5),
        (3, 4, 5, 0.5),
        (3, 6, 7, -0.5),
        (4, 5, 8, s3 / 2.0),
        (6, 7, 8, s3 / 2.0),
    ];
    f.iter().map(|&(a, b, e, v)| (a - 1, b - 1, e - 1, v / s3)).collect()
}

/// `su(3)` with the maximal torus as isotropy and the three root planes as
/// summands (the full flag manifold).
pub fn su3_flag() -> LieAlgebraTable {
    let entries = antisym_entries(&su3_base());
    LieAlgebraTable::from_entries(
        8,
        &entries,
        vec![2, 7],
        vec![vec![0, 1], vec![3, 4], vec![5, 6]],
    )
    .unwrap()
}

/// The flag-manifold table with the two root planes swapped by the
/// intermediate `u(2)` grouped into one summand. Two summands of dimensions
/// 2 and 4; the closed-form two-summand solver applies.
pub fn su3_flag_grouped() -> LieAlgebraTable {
    let entries = antisym_entries(&su3_base());
    LieAlgebraTable::from_entries(8, &entries, vec![2, 7], vec![vec![0, 1], vec![3, 4, 5, 6]])
        .unwrap()
}

/// `su(3)` with an `su(2)` block as isotropy: the 5-sphere with its
/// one-parameter family of invariant metrics (fiber + base of the circle
/// fibration over the complex projective plane).
pub fn su3_su2_sphere() -> LieAlgebraTable {
    let entries = antisym_entries(&su3_base());
    LieAlgebraTable::from_entries(8, &entries, vec![0, 1, 2], vec![vec![7], vec![3, 4, 5, 6]])
        .unwrap()
}

/// Deliberately broken partition: `su(2) + su(2)` where the background
/// product scales the two factors differently and the declared summands mix
/// them. The Killing form restricted to each summand is not a multiple of
/// the identity, so derivation must fail.
pub fn mispartitioned_su2_sum() -> LieAlgebraTable {
    let mut base = su2_base(0, 2.0);
    base.extend(su2_base(3, 1.0));
    let entries = antisym_entries(&base);
    LieAlgebraTable::from_entries(
        6,
        &entries,
        vec![],
        vec![vec![0, 3], vec![1, 4], vec![2, 5]],
    )
    .unwrap()
}

/// The 5-sphere table with both summands merged into one block. The isotropy
/// Casimir operator is not scalar there, so derivation must fail.
pub fn su3_sphere_merged() -> LieAlgebraTable {
    let entries = antisym_entries(&su3_base());
    LieAlgebraTable::from_entries(8, &entries, vec![0, 1, 2], vec![vec![7, 3, 4, 5, 6]]).unwrap()
}
