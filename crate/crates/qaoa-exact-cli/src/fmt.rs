//! Byte-stable float formatting: 17 significant digits, `%.17g`-equivalent.

/// Formats like C's `%.17g`: positional notation when the decimal exponent
/// is in `[-4, 17)`, scientific otherwise, trailing zeros stripped.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    const P: i32 = 17;
    // 17 significant digits in scientific form: d.dddddddddddddddde+XX
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("e-notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..P).contains(&exp) {
        // positional with P - 1 - exp fractional digits
        let prec = (P - 1 - exp).max(0) as usize;
        let s = format!("{x:.prec$}");
        strip_trailing_zeros(&s)
    } else {
        let m = strip_trailing_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { "-" } else { "+" }, exp.abs())
    }
}

fn strip_trailing_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::g17;

    #[test]
    fn matches_c_printf_cases() {
        assert_eq!(g17(0.0), "0");
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(1.5), "1.5");
        assert_eq!(g17(-0.25), "-0.25");
        assert_eq!(g17(100.0), "100");
        assert_eq!(g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(g17(1e17), "1e+17");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(g17(1e16), "10000000000000000");
        assert_eq!(g17(123456.789), "123456.789");
        assert_eq!(g17(2.5e-10), "2.5000000000000002e-10");
        assert_eq!(g17(-3.7e22), "-3.6999999999999998e+22");
    }

    #[test]
    fn round_trips_doubles() {
        let mut state = 123u64;
        for _ in 0..1000 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let x = f64::from_bits(state >> 12 | 0x3ff0000000000000) - 1.5;
            let s = g17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }
}
