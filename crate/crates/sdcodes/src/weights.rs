//! Exhaustive weight distributions split into Gray-code slices.

use rayon::prelude::*;

use sdcodes_core::binary::{weight_distribution_slice, BinaryCode, WeightEnumerator};

use crate::error::Result;

const SLICE_BITS: usize = 8;

/// Same result as [`sdcodes_core::binary::weight_distribution_exhaustive`],
/// summed over `2^8` slices in slice order.
pub fn weight_distribution_par(code: &BinaryCode, max_dimension: usize) -> Result<WeightEnumerator> {
    let bits = SLICE_BITS.min(code.dimension());
    let slices = (0..1u64 << bits)
        .into_par_iter()
        .map(|p| weight_distribution_slice(code, max_dimension, bits, p))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut it = slices.into_iter();
    let mut total = it.next().expect("at least one slice");
    for s in it {
        total.merge(&s);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sdcodes_core::binary::{weight_distribution_exhaustive, DEFAULT_MAX_EXHAUSTIVE_DIMENSION};

    #[test]
    fn agrees_with_single_sweep() {
        let rows: Vec<u128> = (0..10).map(|i| (0b1011_0111u128 << i) | 1 << (20 + i)).collect();
        let code = BinaryCode::from_packed_rows(30, &rows).unwrap();
        let a = weight_distribution_exhaustive(&code, DEFAULT_MAX_EXHAUSTIVE_DIMENSION).unwrap();
        let b = weight_distribution_par(&code, DEFAULT_MAX_EXHAUSTIVE_DIMENSION).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.total(), 1 << 10);
    }
}
