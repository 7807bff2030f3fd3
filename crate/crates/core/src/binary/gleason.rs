//! Leading Gleason coefficients for doubly even self-dual codes of lengths
//! 56 and 64 with minimum weight at least 8, parametrized by `a = A_8`.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GleasonCoefficients {
    pub a8: i64,
    pub a12: i64,
    pub a16: i64,
}

impl GleasonCoefficients {
    pub fn matches(&self, counts: &[u64]) -> bool {
        let get = |w: usize| counts.get(w).map(|&c| c as i64);
        get(8) == Some(self.a8) && get(12) == Some(self.a12) && get(16) == Some(self.a16)
    }
}

/// `W_56(a) = 1 + a y^8 + (8190 + 6a) y^12 + (622314 - 83a) y^16 + ...`
pub fn gleason_w56(a: i64) -> GleasonCoefficients {
    GleasonCoefficients { a8: a, a12: 8190 + 6 * a, a16: 622314 - 83 * a }
}

/// `W_64(a) = 1 + a y^8 + (2976 + 20a) y^12 + (454956 + 2a) y^16 + ...`
pub fn gleason_w64(a: i64) -> GleasonCoefficients {
    GleasonCoefficients { a8: a, a12: 2976 + 20 * a, a16: 454956 + 2 * a }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w56_values() {
        assert_eq!(gleason_w56(0), GleasonCoefficients { a8: 0, a12: 8190, a16: 622314 });
        assert_eq!(gleason_w56(35), GleasonCoefficients { a8: 35, a12: 8400, a16: 619409 });
        assert_eq!(gleason_w56(42), GleasonCoefficients { a8: 42, a12: 8442, a16: 618828 });
    }

    #[test]
    fn w64_values() {
        assert_eq!(gleason_w64(0), GleasonCoefficients { a8: 0, a12: 2976, a16: 454956 });
        assert_eq!(gleason_w64(16), GleasonCoefficients { a8: 16, a12: 3296, a16: 454988 });
        assert_eq!(gleason_w64(19), GleasonCoefficients { a8: 19, a12: 3356, a16: 454994 });
    }

    #[test]
    fn matching_counts() {
        let mut counts = [0u64; 17];
        counts[12] = 8190;
        counts[16] = 622314;
        assert!(gleason_w56(0).matches(&counts));
        assert!(!gleason_w56(1).matches(&counts));
        assert!(!gleason_w56(0).matches(&counts[..13]));
    }
}
