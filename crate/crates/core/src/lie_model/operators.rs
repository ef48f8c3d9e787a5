use crate::exterior::{degree_basis, merge_sign, Bidegree, Blade, Form};
use crate::linalg::{CMat, CVec};

/// Matrices of ∂ and ∂̄ between consecutive total degrees, over the canonical
/// degree bases, for the derivation d determined by d on the 2n generators.
#[derive(Debug, Clone)]
pub struct Operators {
    n: usize,
    bases: Vec<Vec<Blade>>,
    pos: Vec<usize>,
    del: Vec<CMat>,
    delbar: Vec<CMat>,
}

/// d applied to a single blade, by the graded Leibniz rule on generators.
pub fn d_blade(n: usize, gens: &[Form], blade: Blade) -> Form {
    let m = blade.index(n);
    let mut out = Form::zero(n);
    let mut t = 0;
    for g in 0..2 * n {
        let bit = 1usize << g;
        if m & bit == 0 {
            continue;
        }
        let prefix = m & (bit - 1);
        let suffix = m & !(bit | (bit - 1));
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        t += 1;
        for (b2, z) in gens[g].terms() {
            let g2 = b2.index(n);
            if g2 & (prefix | suffix) != 0 {
                continue;
            }
            let s = sign * merge_sign(prefix, g2) * merge_sign(prefix | g2, suffix);
            out.add_to(Blade::from_index(prefix | g2 | suffix, n), z * s);
        }
    }
    out
}

/// d of each of the 2n generators e^1..e^n, ē^1..ē^n from d e^k.
pub fn generator_differentials(de: &[Form]) -> Vec<Form> {
    let mut gens: Vec<Form> = de.to_vec();
    gens.extend(de.iter().map(|f| f.conj()));
    gens
}

impl Operators {
    pub fn new(de: &[Form]) -> Operators {
        let n = de.len();
        let gens = generator_differentials(de);
        let bases: Vec<Vec<Blade>> = (0..=2 * n).map(|k| degree_basis(n, k)).collect();
        let mut pos = vec![0usize; 1 << (2 * n)];
        for basis in &bases {
            for (i, b) in basis.iter().enumerate() {
                pos[b.index(n)] = i;
            }
        }
        let mut del = Vec::with_capacity(2 * n);
        let mut delbar = Vec::with_capacity(2 * n);
        for k in 0..2 * n {
            let mut a = CMat::zeros(bases[k + 1].len(), bases[k].len());
            let mut b = CMat::zeros(bases[k + 1].len(), bases[k].len());
            for (c, blade) in bases[k].iter().enumerate() {
                let bd = blade.bidegree();
                for (t, z) in d_blade(n, &gens, *blade).terms() {
                    let r = pos[t.index(n)];
                    if t.bidegree().p > bd.p {
                        a[(r, c)] += z;
                    } else {
                        b[(r, c)] += z;
                    }
                }
            }
            del.push(a);
            delbar.push(b);
        }
        Operators { n, bases, pos, del, delbar }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self, k: usize) -> &[Blade] {
        &self.bases[k]
    }

    /// ∂ from degree k to k+1 (zero-size past the top degree).
    pub fn del(&self, k: usize) -> CMat {
        self.del.get(k).cloned().unwrap_or_else(|| CMat::zeros(0, self.bases[k].len()))
    }

    pub fn delbar(&self, k: usize) -> CMat {
        self.delbar.get(k).cloned().unwrap_or_else(|| CMat::zeros(0, self.bases[k].len()))
    }

    pub fn d(&self, k: usize) -> CMat {
        self.del(k) + self.delbar(k)
    }

    /// Column positions of the (p,q) blades inside the degree-(p+q) basis.
    pub fn positions(&self, bd: Bidegree) -> Vec<usize> {
        if !bd.valid_for(self.n) {
            return vec![];
        }
        self.bases[bd.degree()]
            .iter()
            .filter(|b| b.bidegree() == bd)
            .map(|b| self.pos[b.index(self.n)])
            .collect()
    }

    /// Submatrix of a degree-k → degree-l operator between two bidegree blocks.
    pub fn block(&self, m: &CMat, src: Bidegree, dst: Bidegree) -> CMat {
        let cols = self.positions(src);
        let rows = self.positions(dst);
        CMat::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])])
    }

    /// ∂ : Λ^{p,q} → Λ^{p+1,q}; empty when the source or target is out of range.
    pub fn del_block(&self, src: Bidegree) -> CMat {
        let dst = Bidegree::new(src.p + 1, src.q);
        if !src.valid_for(self.n) {
            return CMat::zeros(self.positions(dst).len(), 0);
        }
        self.block(&self.del(src.degree()), src, dst)
    }

    /// ∂̄ : Λ^{p,q} → Λ^{p,q+1}.
    pub fn delbar_block(&self, src: Bidegree) -> CMat {
        let dst = Bidegree::new(src.p, src.q + 1);
        if !src.valid_for(self.n) {
            return CMat::zeros(self.positions(dst).len(), 0);
        }
        self.block(&self.delbar(src.degree()), src, dst)
    }

    /// Degree-k coordinate vector of a form (other degrees are dropped).
    pub fn coords(&self, f: &Form, k: usize) -> CVec {
        f.coords(&self.bases[k])
    }

    pub fn form(&self, v: &CVec, k: usize) -> Form {
        Form::from_coords(self.n, &self.bases[k], v)
    }

    /// Apply a degree-raising operator family (∂, ∂̄ or d) to every degree of `f`.
    pub fn apply(&self, f: &Form, which: Which) -> Form {
        let mut out = Form::zero(self.n);
        for k in 0..2 * self.n {
            let v = self.coords(f, k);
            if v.iter().all(|z| *z == crate::linalg::ZERO) {
                continue;
            }
            let m = match which {
                Which::Del => &self.del[k],
                Which::Delbar => &self.delbar[k],
                Which::D => {
                    out += &self.form(&(&self.del[k] * &v + &self.delbar[k] * &v), k + 1);
                    continue;
                }
            };
            out += &self.form(&(m * &v), k + 1);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    D,
    Del,
    Delbar,
}
