use num_integer::Integer;

/// `(g, s, t)` with `g = gcd(a, b) = s a + t b`, `g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let r = a.extended_gcd(&b);
    if r.gcd < 0 {
        (-r.gcd, -r.x, -r.y)
    } else {
        (r.gcd, r.x, r.y)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd((a % m) as i64, m as i64);
    (g == 1).then(|| s.rem_euclid(m as i64) as u64)
}

#[inline]
pub fn reduce(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

/// Some `y` with `a y = c (mod m)`, if one exists.
pub fn solve_linear(a: u64, c: u64, m: u64) -> Option<u64> {
    let g = (a % m).gcd(&m);
    let g = if g == 0 { m } else { g };
    if c % g != 0 {
        return None;
    }
    let m2 = m / g;
    if m2 == 1 {
        return Some(0);
    }
    let inv = inv_mod((a / g) % m2, m2)?;
    Some(((c / g) % m2) * inv % m2)
}
