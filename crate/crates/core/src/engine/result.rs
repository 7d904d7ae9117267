use super::Priority;

/// The top-k result set `R`.
///
/// Entries are kept sorted by priority, descending, with ties in arrival order.
/// Entries tied with the k-th priority are all retained, so `len()` may exceed `k`.
#[derive(Clone, Debug)]
pub struct ResultSet<T> {
    k: usize,
    entries: Vec<(T, Priority)>,
}

impl<T> ResultSet<T> {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "result set capacity must be at least 1");
        ResultSet {
            k,
            entries: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|R| >= k`, i.e. the k-th entry exists and pruning may start.
    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.k
    }

    pub fn kth(&self) -> Option<&(T, Priority)> {
        self.entries.get(self.k - 1)
    }

    pub fn entries(&self) -> &[(T, Priority)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(T, Priority)> {
        self.entries
    }

    pub fn priorities(&self) -> Vec<Priority> {
        self.entries.iter().map(|(_, p)| p.clone()).collect()
    }

    /// Whether `offer` would insert an item with this priority.
    pub fn accepts(&self, p: &Priority) -> bool {
        match self.kth() {
            Some((_, kth)) => p >= kth,
            None => true,
        }
    }

    /// Inserts when `|R| < k` or `p` is at least the k-th priority, then evicts
    /// every entry strictly below the new k-th priority.
    pub fn offer(&mut self, item: T, p: Priority) -> bool {
        if !self.accepts(&p) {
            return false;
        }
        let pos = self.entries.partition_point(|(_, q)| *q >= p);
        self.entries.insert(pos, (item, p));
        if self.entries.len() > self.k {
            let kth = self.entries[self.k - 1].1.clone();
            let keep = self.entries.partition_point(|(_, q)| *q >= kth);
            self.entries.truncate(keep);
        }
        true
    }
}
