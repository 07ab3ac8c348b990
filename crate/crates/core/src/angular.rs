//! Wigner 3j / 6j symbols and Clebsch-Gordan coefficients.
//!
//! All angular momenta are passed doubled (`2j`, `2m`) so that half-integer
//! arithmetic stays exact.

const FACTORIAL_TABLE_LEN: usize = 171;

fn factorial(n: i32) -> f64 {
    static TABLE: std::sync::OnceLock<[f64; FACTORIAL_TABLE_LEN]> = std::sync::OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [1.0; FACTORIAL_TABLE_LEN];
        for i in 1..FACTORIAL_TABLE_LEN {
            t[i] = t[i - 1] * i as f64;
        }
        t
    });
    assert!(n >= 0 && (n as usize) < FACTORIAL_TABLE_LEN, "factorial argument {n} out of range");
    table[n as usize]
}

fn triangle(dj1: i32, dj2: i32, dj3: i32) -> bool {
    dj3 >= (dj1 - dj2).abs() && dj3 <= dj1 + dj2 && (dj1 + dj2 + dj3) % 2 == 0
}

/// Triangle coefficient Δ(abc) with doubled arguments.
fn delta(da: i32, db: i32, dc: i32) -> f64 {
    (factorial((da + db - dc) / 2) * factorial((da - db + dc) / 2) * factorial((-da + db + dc) / 2)
        / factorial((da + db + dc) / 2 + 1))
        .sqrt()
}

#[inline]
fn phase(k: i32) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)` with doubled arguments.
pub fn wigner_3j(dj1: i32, dj2: i32, dj3: i32, dm1: i32, dm2: i32, dm3: i32) -> f64 {
    if dm1 + dm2 + dm3 != 0 || !triangle(dj1, dj2, dj3) {
        return 0.0;
    }
    if dm1.abs() > dj1 || dm2.abs() > dj2 || dm3.abs() > dj3 {
        return 0.0;
    }
    if (dj1 + dm1) % 2 != 0 || (dj2 + dm2) % 2 != 0 || (dj3 + dm3) % 2 != 0 {
        return 0.0;
    }
    // Racah formula
    let t1 = (dj2 - dm1 - dj3) / 2;
    let t2 = (dj1 + dm2 - dj3) / 2;
    let t3 = (dj1 + dj2 - dj3) / 2;
    let t4 = (dj1 - dm1) / 2;
    let t5 = (dj2 + dm2) / 2;
    let kmin = 0.max(t1).max(t2);
    let kmax = t3.min(t4).min(t5);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        sum += phase(k)
            / (factorial(k)
                * factorial(k - t1)
                * factorial(k - t2)
                * factorial(t3 - k)
                * factorial(t4 - k)
                * factorial(t5 - k));
    }
    let norm = delta(dj1, dj2, dj3)
        * (factorial((dj1 + dm1) / 2)
            * factorial((dj1 - dm1) / 2)
            * factorial((dj2 + dm2) / 2)
            * factorial((dj2 - dm2) / 2)
            * factorial((dj3 + dm3) / 2)
            * factorial((dj3 - dm3) / 2))
            .sqrt();
    phase((dj1 - dj2 - dm3) / 2) * norm * sum
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}` with doubled arguments.
pub fn wigner_6j(dj1: i32, dj2: i32, dj3: i32, dj4: i32, dj5: i32, dj6: i32) -> f64 {
    if !triangle(dj1, dj2, dj3)
        || !triangle(dj1, dj5, dj6)
        || !triangle(dj4, dj2, dj6)
        || !triangle(dj4, dj5, dj3)
    {
        return 0.0;
    }
    let a1 = (dj1 + dj2 + dj3) / 2;
    let a2 = (dj1 + dj5 + dj6) / 2;
    let a3 = (dj4 + dj2 + dj6) / 2;
    let a4 = (dj4 + dj5 + dj3) / 2;
    let b1 = (dj1 + dj2 + dj4 + dj5) / 2;
    let b2 = (dj2 + dj3 + dj5 + dj6) / 2;
    let b3 = (dj3 + dj1 + dj6 + dj4) / 2;
    let kmin = a1.max(a2).max(a3).max(a4);
    let kmax = b1.min(b2).min(b3);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        sum += phase(k) * factorial(k + 1)
            / (factorial(k - a1)
                * factorial(k - a2)
                * factorial(k - a3)
                * factorial(k - a4)
                * factorial(b1 - k)
                * factorial(b2 - k)
                * factorial(b3 - k));
    }
    delta(dj1, dj2, dj3) * delta(dj1, dj5, dj6) * delta(dj4, dj2, dj6) * delta(dj4, dj5, dj3) * sum
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` with doubled arguments.
pub fn clebsch_gordan(dj1: i32, dm1: i32, dj2: i32, dm2: i32, dj: i32, dm: i32) -> f64 {
    phase((dj1 - dj2 + dm) / 2) * ((dj + 1) as f64).sqrt() * wigner_3j(dj1, dj2, dj, dm1, dm2, -dm)
}
