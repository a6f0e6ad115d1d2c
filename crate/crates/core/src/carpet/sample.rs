//! Seeded random points snapped to a dyadic grid.

use rand::Rng;

use crate::carpet::point::{locate, CarpetPoint, Face, Location, Side};
use crate::dyadic::Dyadic;

/// A uniformly random node of the `2^-e` grid, valid at `level`; a random
/// side is chosen when the node lies inside a slit.
pub fn random_point<R: Rng>(rng: &mut R, level: u32, e: u32) -> CarpetPoint {
    let m = 1i128 << e;
    let x = Dyadic::new(rng.gen_range(0..=m), e);
    let y = Dyadic::new(rng.gen_range(0..=m), e);
    let side = match locate(x, y, level) {
        Ok(Location::InSlit(_)) => Some(if rng.gen() { Side::Left } else { Side::Right }),
        _ => None,
    };
    CarpetPoint {
        x,
        y,
        side,
        face: None,
    }
}

/// As [`random_point`], on a random copy of the double.
pub fn random_double_point<R: Rng>(rng: &mut R, level: u32, e: u32) -> CarpetPoint {
    let p = random_point(rng, level, e);
    let face = if rng.gen() { Face::Front } else { Face::Back };
    p.with_face(Some(face))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid_and_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let p = random_double_point(&mut a, 3, 5);
            assert_eq!(p, random_double_point(&mut b, 3, 5));
            p.validate_double(3).unwrap();
        }
    }
}
