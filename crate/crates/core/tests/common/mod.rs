//! Brute-force Sobol' reference: direction numbers from the primitive
//! polynomial recurrence, points by XOR over the Gray code of the index.

/// (degree, coefficient bits, initial m values) for dimensions 2..=8.
const TABLE: [(u32, u32, &[u32]); 7] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
];

fn reference_directions(dim_index: usize) -> Vec<u64> {
    // m_k as odd integers below 2^k; v_k = m_k / 2^k held as m_k << (32 - k)
    let m: Vec<u64> = if dim_index == 0 {
        vec![1; 32]
    } else {
        let (s, a, init) = TABLE[dim_index - 1];
        let s = s as usize;
        let mut m: Vec<u64> = init.iter().map(|&v| v as u64).collect();
        for k in s..32 {
            let mut next = m[k - s] ^ (m[k - s] << s);
            for i in 1..s {
                if (a >> (s - 1 - i)) & 1 == 1 {
                    next ^= m[k - i] << i;
                }
            }
            m.push(next);
        }
        m
    };
    m.iter().enumerate().map(|(k, &mk)| mk << (31 - k)).collect()
}

pub fn reference_point(dim: usize, index: u64) -> Vec<u64> {
    let gray = index ^ (index >> 1);
    (0..dim)
        .map(|d| {
            let v = reference_directions(d);
            (0..32).filter(|&j| (gray >> j) & 1 == 1).fold(0u64, |acc, j| acc ^ v[j])
        })
        .collect()
}
