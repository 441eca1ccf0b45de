//! Lexicographic numbering of increasing pairs and triples in `{0..n}`.

#[derive(Debug, Clone)]
pub struct Pairs {
    n: usize,
    list: Vec<[usize; 2]>,
    index: Vec<usize>,
}

impl Pairs {
    pub fn new(n: usize) -> Self {
        let w = n + 1;
        let mut list = Vec::new();
        let mut index = vec![usize::MAX; w * w];
        for i in 0..=n {
            for j in i + 1..=n {
                index[i * w + j] = list.len();
                list.push([i, j]);
            }
        }
        Pairs { n, list, index }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j <= self.n);
        self.index[i * (self.n + 1) + j]
    }

    pub fn list(&self) -> &[[usize; 2]] {
        &self.list
    }
}

#[derive(Debug, Clone)]
pub struct Triples {
    n: usize,
    list: Vec<[usize; 3]>,
    index: Vec<usize>,
}

impl Triples {
    pub fn new(n: usize) -> Self {
        let w = n + 1;
        let mut list = Vec::new();
        let mut index = vec![usize::MAX; w * w * w];
        for i in 0..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    index[(i * w + j) * w + k] = list.len();
                    list.push([i, j, k]);
                }
            }
        }
        Triples { n, list, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < j && j < k && k <= self.n, "bad triple ({i},{j},{k})");
        let w = self.n + 1;
        self.index[(i * w + j) * w + k]
    }

    pub fn list(&self) -> &[[usize; 3]] {
        &self.list
    }
}

/// Quadruples `i < j < k < l <= n` in lexicographic order.
pub fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..=n).flat_map(move |i| {
        (i + 1..=n).flat_map(move |j| {
            (j + 1..=n).flat_map(move |k| (k + 1..=n).map(move |l| [i, j, k, l]))
        })
    })
}

/// Whether `{p, q}` is contained in the index set `s`.
pub fn contains_both(s: &[usize], p: usize, q: usize) -> bool {
    s.contains(&p) && s.contains(&q)
}

/// Monotone injection `[n-1] -> [n]` skipping `j`.
#[inline]
pub fn coface(j: usize, a: usize) -> usize {
    if a < j {
        a
    } else {
        a + 1
    }
}

/// Monotone surjection `[n+1] -> [n]` hitting `j` twice.
#[inline]
pub fn codegeneracy(j: usize, a: usize) -> usize {
    if a <= j {
        a
    } else {
        a - 1
    }
}
