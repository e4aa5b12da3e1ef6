//! Exhaustive enumeration kernels. Each returns raw counts keyed by
//! `(components, marked pairs)`: edges for graphs, ties for tournaments.

use std::collections::BTreeMap;
use std::ops::Range;
use std::thread;

pub(crate) type Counts = BTreeMap<(usize, usize), u64>;

fn pairs(k: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            v.push((i, j));
        }
    }
    v
}

/// Splits `0..total` into `threads` contiguous ranges, runs `work` on each
/// and merges the counts. The result does not depend on `threads`.
fn partitioned<F>(total: u64, threads: usize, work: F) -> Counts
where
    F: Fn(Range<u64>) -> Counts + Sync,
{
    let threads = (threads.max(1) as u64).min(total.max(1));
    if threads == 1 {
        return work(0..total);
    }
    let chunk = total.div_ceil(threads);
    let parts: Vec<Counts> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let lo = (t * chunk).min(total);
                let hi = ((t + 1) * chunk).min(total);
                let work = &work;
                s.spawn(move || work(lo..hi))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("enumeration worker panicked"))
            .collect()
    });
    let mut merged = Counts::new();
    for part in parts {
        for (key, c) in part {
            *merged.entry(key).or_insert(0) += c;
        }
    }
    merged
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// All `2^{C(k,2)}` graphs on `[k]`, bit `e` of the index selecting pair `e`.
pub(crate) fn graph_counts(k: usize, threads: usize) -> Counts {
    let pairs = pairs(k);
    let total = 1u64 << pairs.len();
    partitioned(total, threads, |range| {
        let mut counts = Counts::new();
        let mut parent = vec![0usize; k];
        for mask in range {
            for (i, p) in parent.iter_mut().enumerate() {
                *p = i;
            }
            let mut components = k;
            for (e, &(i, j)) in pairs.iter().enumerate() {
                if mask >> e & 1 == 1 {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                        components -= 1;
                    }
                }
            }
            *counts.entry((components, mask.count_ones() as usize)).or_insert(0) += 1;
        }
        counts
    })
}

/// Number of strongly connected components of a digraph on `k <= 64`
/// vertices given by out-neighbour bitmasks.
pub fn scc_count(out: &[u64]) -> usize {
    struct Tarjan<'a> {
        out: &'a [u64],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        count: usize,
    }

    impl Tarjan<'_> {
        fn visit(&mut self, v: usize) {
            self.index[v] = Some(self.next);
            self.low[v] = self.next;
            self.next += 1;
            self.stack.push(v);
            self.on_stack[v] = true;
            let mut succ = self.out[v];
            while succ != 0 {
                let w = succ.trailing_zeros() as usize;
                succ &= succ - 1;
                match self.index[w] {
                    None => {
                        self.visit(w);
                        self.low[v] = self.low[v].min(self.low[w]);
                    }
                    Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                    Some(_) => {}
                }
            }
            if Some(self.low[v]) == self.index[v] {
                while let Some(w) = self.stack.pop() {
                    self.on_stack[w] = false;
                    if w == v {
                        break;
                    }
                }
                self.count += 1;
            }
        }
    }

    let n = out.len();
    let mut t = Tarjan {
        out,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::with_capacity(n),
        next: 0,
        count: 0,
    };
    for v in 0..n {
        if t.index[v].is_none() {
            t.visit(v);
        }
    }
    t.count
}

/// All `3^{C(k,2)}` tournaments with ties on `[k]`. The index is read in
/// base 3 with the first pair as the most significant digit; digit 0 is
/// `i -> j`, 1 is `j -> i`, 2 is a tie.
pub(crate) fn tie_counts(k: usize, threads: usize) -> Counts {
    let pairs = pairs(k);
    let total = 3u64.pow(pairs.len() as u32);
    partitioned(total, threads, |range| {
        let mut counts = Counts::new();
        let mut out = vec![0u64; k];
        for index in range {
            out.iter_mut().for_each(|o| *o = 0);
            let mut rest = index;
            let mut ties = 0;
            for &(i, j) in pairs.iter().rev() {
                match rest % 3 {
                    0 => out[i] |= 1 << j,
                    1 => out[j] |= 1 << i,
                    _ => {
                        out[i] |= 1 << j;
                        out[j] |= 1 << i;
                        ties += 1;
                    }
                }
                rest /= 3;
            }
            *counts.entry((scc_count(&out), ties)).or_insert(0) += 1;
        }
        counts
    })
}
