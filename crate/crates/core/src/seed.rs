use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent generator for task `stream` under a master `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform integer in `[0, bound)` by rejection on the bit length of `bound`.
pub fn uniform_below<R: RngCore>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(bound.bits() > 0, "bound must be positive");
    let bits = bound.bits();
    let nbytes = bits.div_ceil(8) as usize;
    let top_mask = if bits.is_multiple_of(8) { 0xff } else { (1u8 << (bits % 8)) - 1 };
    let mut buf = vec![0u8; nbytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[nbytes - 1] &= top_mask;
        let x = BigUint::from_bytes_le(&buf);
        if &x < bound {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_differ() {
        let a: u64 = stream_rng(1, 0).random();
        let b: u64 = stream_rng(1, 1).random();
        let c: u64 = stream_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn uniform_below_small_bound() {
        let mut rng = stream_rng(3, 0);
        let bound = BigUint::from(3u32);
        let mut hits = [0usize; 3];
        for _ in 0..3000 {
            let x: usize = uniform_below(&mut rng, &bound).try_into().unwrap();
            hits[x] += 1;
        }
        assert!(hits.iter().all(|&h| h > 850));
        assert_eq!(uniform_below(&mut rng, &BigUint::from(1u32)), BigUint::from(0u32));
    }
}
