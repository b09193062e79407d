//! Small integer helpers.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Prime factorisation in ascending prime order; empty for 1.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// True when `n` is a power of `p` (including `p^0 = 1`).
pub fn is_power_of(n: usize, p: u64) -> bool {
    let mut n = n as u64;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// True when every prime divisor of `n` lies in `pi`.
pub fn is_pi_number(n: usize, pi: &[u64]) -> bool {
    factorize(n as u64).iter().all(|(p, _)| pi.contains(p))
}

/// True when no prime divisor of `n` lies in `pi`.
pub fn is_pi_prime_number(n: usize, pi: &[u64]) -> bool {
    factorize(n as u64).iter().all(|(p, _)| !pi.contains(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorisation() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(24), vec![(2, 3), (3, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert!(is_power_of(8, 2) && is_power_of(1, 5) && !is_power_of(12, 2));
        assert!(is_pi_number(12, &[2, 3]) && !is_pi_number(10, &[2, 3]));
        assert_eq!(lcm(4, 6), 12);
    }
}
