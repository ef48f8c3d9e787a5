use serde::{Deserialize, Serialize};

/// Type label (p,q) of a homogeneous form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: usize,
    pub q: usize,
}

impl Bidegree {
    pub fn new(p: usize, q: usize) -> Bidegree {
        Bidegree { p, q }
    }

    pub fn degree(&self) -> usize {
        self.p + self.q
    }

    pub fn valid_for(&self, n: usize) -> bool {
        self.p <= n && self.q <= n
    }
}

impl std::fmt::Display for Bidegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Basis form e^{i1}∧…∧e^{ip}∧ē^{j1}∧…∧ē^{jq}. Bit `i-1` of `holo`
/// (resp. `anti`) marks the presence of e^i (resp. ē^i).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade {
    pub holo: u32,
    pub anti: u32,
}

impl Blade {
    pub fn new(holo: u32, anti: u32) -> Blade {
        Blade { holo, anti }
    }

    /// Blade from 1-based index lists; indices must be distinct (order is ignored).
    pub fn from_indices(holo: &[usize], anti: &[usize]) -> Blade {
        let mask = |idx: &[usize]| idx.iter().fold(0u32, |m, &i| m | (1 << (i - 1)));
        Blade { holo: mask(holo), anti: mask(anti) }
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.holo.count_ones() as usize, self.anti.count_ones() as usize)
    }

    pub fn degree(&self) -> usize {
        (self.holo.count_ones() + self.anti.count_ones()) as usize
    }

    /// Position of this blade in the dense coefficient vector of a dimension-`n` form.
    pub fn index(&self, n: usize) -> usize {
        (self.holo as usize) | ((self.anti as usize) << n)
    }

    pub fn from_index(idx: usize, n: usize) -> Blade {
        let low = (1usize << n) - 1;
        Blade { holo: (idx & low) as u32, anti: (idx >> n) as u32 }
    }

    pub fn holo_indices(&self) -> Vec<usize> {
        bits(self.holo).into_iter().map(|b| b + 1).collect()
    }

    pub fn anti_indices(&self) -> Vec<usize> {
        bits(self.anti).into_iter().map(|b| b + 1).collect()
    }

    /// Human-readable label such as `e1^e2^eb3`.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self.holo_indices().iter().map(|i| format!("e{i}")).collect();
        parts.extend(self.anti_indices().iter().map(|i| format!("eb{i}")));
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("^")
        }
    }
}

/// Set bit positions of a mask, ascending.
pub fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Sign of the permutation that sorts the concatenation `a ++ b` of two
/// ascending disjoint index sets, given as combined masks.
pub fn merge_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        swaps += (a >> (y + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// All subsets of {0..n-1} of the given size, as ascending masks.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1u32 << n)).filter(|m| m.count_ones() as usize == k).collect()
}

/// Canonical ordered basis of Λ^{p,q} in dimension `n`.
pub fn bidegree_basis(n: usize, bd: Bidegree) -> Vec<Blade> {
    if !bd.valid_for(n) {
        return vec![];
    }
    let mut out = Vec::new();
    for h in subsets_of_size(n, bd.p) {
        for a in subsets_of_size(n, bd.q) {
            out.push(Blade::new(h, a));
        }
    }
    out
}

/// Canonical ordered basis of total-degree-`k` forms, grouped by descending p.
pub fn degree_basis(n: usize, k: usize) -> Vec<Blade> {
    let mut out = Vec::new();
    for p in (0..=k.min(n)).rev() {
        let q = k - p;
        if q <= n {
            out.extend(bidegree_basis(n, Bidegree::new(p, q)));
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_sign_counts_inversions() {
        assert_eq!(merge_sign(0b01, 0b10), 1.0);
        assert_eq!(merge_sign(0b10, 0b01), -1.0);
        // (1,2) merged after (0): 0 inversions; (0,2) then (1): one inversion
        assert_eq!(merge_sign(0b101, 0b010), -1.0);
        // explicit shuffle (2,3) ++ (0,1): four inversions
        assert_eq!(merge_sign(0b1100, 0b0011), 1.0);
    }

    #[test]
    fn basis_sizes_are_binomial_products() {
        for n in 1..=4 {
            for p in 0..=n {
                for q in 0..=n {
                    let b = bidegree_basis(n, Bidegree::new(p, q));
                    assert_eq!(b.len(), binomial(n, p) * binomial(n, q));
                }
            }
            let total: usize = (0..=2 * n).map(|k| degree_basis(n, k).len()).sum();
            assert_eq!(total, 1 << (2 * n));
        }
    }

    #[test]
    fn index_round_trip() {
        let b = Blade::from_indices(&[1, 3], &[2]);
        assert_eq!(Blade::from_index(b.index(3), 3), b);
        assert_eq!(b.label(), "e1^e3^eb2");
        assert_eq!(b.bidegree(), Bidegree::new(2, 1));
    }
}
