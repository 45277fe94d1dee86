use crate::algebra::{Monomial, Var};
use crate::error::{Error, Result};

/// Data of the colour `u~_i` built from primary colours `u_1..u_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AndrewsColour {
    /// Product of the primary colours whose bit is set in `i`.
    pub weight: Monomial,
    /// Number of primary colours.
    pub w: u32,
    /// Smallest primary index.
    pub v: u32,
    /// Largest primary index.
    pub z: u32,
}

pub fn primary_var(k: u32) -> Var {
    Var::named(&format!("u{k}"))
}

/// Colour data for index `1 <= i <= 2^r - 1`.
pub fn andrews_colour_data(i: u32, r: u32) -> Result<AndrewsColour> {
    if !(1..=7).contains(&r) {
        return Err(Error::InvalidParameter(format!("r must be between 1 and 7, got {r}")));
    }
    if i == 0 || i >= 1 << r {
        return Err(Error::InvalidParameter(format!(
            "colour index {i} is outside 1..={}",
            (1u32 << r) - 1
        )));
    }
    let bits: Vec<u32> = (1..=r).filter(|k| i >> (k - 1) & 1 == 1).collect();
    Ok(AndrewsColour {
        weight: Monomial::from_pairs(bits.iter().map(|k| (primary_var(*k), 1))),
        w: bits.len() as u32,
        v: bits[0],
        z: *bits.last().unwrap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_expansion() {
        let c = andrews_colour_data(5, 3).unwrap();
        assert_eq!(c.weight, Monomial::parse("u1*u3").unwrap());
        assert_eq!((c.w, c.v, c.z), (2, 1, 3));
        let c = andrews_colour_data(1, 1).unwrap();
        assert_eq!((c.w, c.v, c.z), (1, 1, 1));
        assert_eq!(andrews_colour_data(7, 3).unwrap().w, 3);
    }

    #[test]
    fn index_out_of_range() {
        assert!(andrews_colour_data(0, 2).is_err());
        assert!(andrews_colour_data(4, 2).is_err());
    }
}
