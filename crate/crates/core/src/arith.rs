//! Small rational-integer helpers shared by every layer.

use num_integer::Integer;

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
    out.sort_unstable();
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

pub fn coprime_to_all(d: u64, primes: &[u64]) -> bool {
    primes.iter().all(|&p| d % p != 0)
}

/// Kronecker symbol (a/n) for n >= 1.
pub fn kronecker(a: i64, n: u64) -> i64 {
    let mut result = 1i64;
    let mut n = n;
    let mut a = a;
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n) for odd n.
    let mut n = n as i64;
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn gcd_all<I: IntoIterator<Item = i128>>(it: I) -> i128 {
    it.into_iter().fold(0i128, |g, x| g.gcd(&x))
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_bruteforce(a: i64, p: u64) -> i64 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion_at_odd_primes() {
        for p in primes_up_to(60).into_iter().filter(|&p| p > 2) {
            for a in -30..30 {
                assert_eq!(kronecker(a, p), legendre_bruteforce(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_at_two_follows_residue_mod_eight() {
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-3, 4), 1);
    }

    #[test]
    fn squarefree_and_factors() {
        assert!(is_squarefree(30));
        assert!(!is_squarefree(12));
        assert_eq!(prime_factors(60), vec![2, 3, 5]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(isqrt(99), 9);
    }
}
