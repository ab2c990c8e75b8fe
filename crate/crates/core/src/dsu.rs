/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Union-find carrying integer potentials: tracks `z[x] - z[root(x)]` so that
/// difference constraints `z[a] - z[b] = w` can be merged and checked.
#[derive(Clone, Debug, Default)]
pub(crate) struct PotentialDsu {
    parent: Vec<u32>,
    pot: Vec<i64>,
}

pub(crate) enum Merge {
    Joined,
    Consistent,
    Conflict,
}

impl PotentialDsu {
    pub fn reset(&mut self, n: usize) {
        self.parent.clear();
        self.parent.extend(0..n as u32);
        self.pot.clear();
        self.pot.resize(n, 0);
    }

    /// Root of `x` and `z[x] - z[root]`.
    pub fn find(&mut self, x: usize) -> (usize, i64) {
        let mut root = x;
        let mut acc = 0i64;
        while self.parent[root] as usize != root {
            acc += self.pot[root];
            root = self.parent[root] as usize;
        }
        // compress
        let mut cur = x;
        let mut rem = acc;
        while self.parent[cur] as usize != root && cur != root {
            let next = self.parent[cur] as usize;
            let step = self.pot[cur];
            self.parent[cur] = root as u32;
            self.pot[cur] = rem;
            rem -= step;
            cur = next;
        }
        (root, acc)
    }

    /// Impose `z[a] - z[b] = w`.
    pub fn relate(&mut self, a: usize, b: usize, w: i64) -> Merge {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return if pa - pb == w {
                Merge::Consistent
            } else {
                Merge::Conflict
            };
        }
        // z[rb] - z[ra] = pa - pb - w
        self.parent[rb] = ra as u32;
        self.pot[rb] = pa - pb - w;
        Merge::Joined
    }
}
