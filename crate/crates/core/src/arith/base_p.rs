//! Base-p digit functionals: leading parts `t_j(n) = floor(n / p^j)`, digit
//! windows `t_{j,l}(n)`, and carries of base-p addition.

fn pow_or_none(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

/// `floor(n / p^j)`.
pub fn t_j(n: u64, j: u32, p: u64) -> u64 {
    match pow_or_none(p, j) {
        Some(q) => n / q,
        None => 0,
    }
}

/// The `l` base-p digits of `n` starting at digit `j`, read as a number in
/// `[0, p^l - 1]`.
pub fn t_jl(n: u64, j: u32, l: u32, p: u64) -> u64 {
    let t = t_j(n, j, p);
    match pow_or_none(p, l) {
        Some(q) => t % q,
        None => t,
    }
}

/// 1 iff adding `n` and `n2` in base `p` carries out of digit `j`.
/// By convention there is never a carry out of digit `-1`.
pub fn carry_eps(n: u64, n2: u64, j: i64, p: u64) -> u8 {
    if j < 0 {
        return 0;
    }
    match pow_or_none(p, j as u32 + 1) {
        // carry out of digit j <=> the low j+1 digits overflow
        Some(q) => ((n % q) as u128 + (n2 % q) as u128 >= q as u128) as u8,
        None => 0,
    }
}

/// `t_j(n + n2) - t_j(n) - t_j(n2) == eps_{j-1}(n, n2)`.
pub fn verify_carry_lemma(n: u64, n2: u64, j: u32, p: u64) -> bool {
    let lhs = t_j(n + n2, j, p) as i128 - t_j(n, j, p) as i128 - t_j(n2, j, p) as i128;
    lhs == carry_eps(n, n2, j as i64 - 1, p) as i128
}
