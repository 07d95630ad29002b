//! Root-of-unity parameters: given `n` and the order `m''` of the square
//! of the quantum parameter, derive the divisor chain used by the center
//! and rank formulas.

use serde::Serialize;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RootParams {
    pub n: u64,
    /// order of q-hat squared
    pub m2: u64,
    /// gcd(n, m'')
    pub d_prime: u64,
    /// m'' / d'
    pub m_prime: u64,
    /// gcd(2n, m')
    pub d: u64,
    /// m' / d
    pub m: u64,
    pub odd_order: bool,
}

pub fn derive_params(n: u64, m2: u64) -> RootParams {
    assert!(n >= 2 && m2 >= 1);
    let d_prime = gcd(n, m2);
    let m_prime = m2 / d_prime;
    let d = gcd(2 * n, m_prime);
    let m = m_prime / d;
    RootParams {
        n,
        m2,
        d_prime,
        m_prime,
        d,
        m,
        odd_order: m2 % 2 == 1,
    }
}
