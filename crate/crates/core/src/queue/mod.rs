//! Queues the engine can explore from.
//!
//! [`MemoryQueue`] is the plain max-heap, [`FifoQueue`] ignores priorities (the
//! unprioritized baseline), and [`VirtualPriorityQueue`] spills to sorted runs on
//! disk once an in-memory record threshold is crossed. All priority queues break
//! ties by enqueue order.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::path::PathBuf;

use thiserror::Error;

use crate::codec::{Codec, CodecError};
use crate::engine::Priority;

mod vpq;

pub use vpq::{read_run_file, RunInfo, VirtualPriorityQueue, VpqConfig, VpqStats};

#[derive(Debug, Error)]
pub enum QueueError {
    #[error("queue i/o failed on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt record in {path}: {source}")]
    Corrupt {
        path: PathBuf,
        #[source]
        source: CodecError,
    },
    #[error("invalid queue configuration: {0}")]
    Config(String),
    #[error("queue is unusable after an earlier write failure")]
    Unusable,
}

pub trait SubgraphQueue<T> {
    fn enqueue(&mut self, item: T, priority: Priority) -> Result<(), QueueError>;
    fn dequeue_max(&mut self) -> Result<Option<(T, Priority)>, QueueError>;
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T, Q: SubgraphQueue<T> + ?Sized> SubgraphQueue<T> for Box<Q> {
    fn enqueue(&mut self, item: T, priority: Priority) -> Result<(), QueueError> {
        (**self).enqueue(item, priority)
    }
    fn dequeue_max(&mut self) -> Result<Option<(T, Priority)>, QueueError> {
        (**self).dequeue_max()
    }
    fn len(&self) -> usize {
        (**self).len()
    }
}

/// Heap entry ordered by priority, then by earliest sequence number.
pub(crate) struct Entry<T> {
    pub priority: Priority,
    pub seq: u64,
    pub item: T,
}

impl<T> Ord for Entry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .cmp(&other.priority)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl<T> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T> Eq for Entry<T> {}

/// Unbounded in-memory max-priority queue.
pub struct MemoryQueue<T> {
    heap: BinaryHeap<Entry<T>>,
    next_seq: u64,
}

impl<T> MemoryQueue<T> {
    pub fn new() -> Self {
        MemoryQueue {
            heap: BinaryHeap::new(),
            next_seq: 0,
        }
    }
}

impl<T> Default for MemoryQueue<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> SubgraphQueue<T> for MemoryQueue<T> {
    fn enqueue(&mut self, item: T, priority: Priority) -> Result<(), QueueError> {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Entry {
            priority,
            seq,
            item,
        });
        Ok(())
    }

    fn dequeue_max(&mut self) -> Result<Option<(T, Priority)>, QueueError> {
        Ok(self.heap.pop().map(|e| (e.item, e.priority)))
    }

    fn len(&self) -> usize {
        self.heap.len()
    }
}

/// Insertion-order queue that ignores priorities.
pub struct FifoQueue<T> {
    items: VecDeque<(T, Priority)>,
}

impl<T> FifoQueue<T> {
    pub fn new() -> Self {
        FifoQueue {
            items: VecDeque::new(),
        }
    }
}

impl<T> Default for FifoQueue<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> SubgraphQueue<T> for FifoQueue<T> {
    fn enqueue(&mut self, item: T, priority: Priority) -> Result<(), QueueError> {
        self.items.push_back((item, priority));
        Ok(())
    }

    fn dequeue_max(&mut self) -> Result<Option<(T, Priority)>, QueueError> {
        Ok(self.items.pop_front())
    }

    fn len(&self) -> usize {
        self.items.len()
    }
}

/// Which queue a run should use.
#[derive(Clone, Debug)]
pub enum QueueKind {
    Memory,
    Fifo,
    Virtual(VpqConfig),
}

impl QueueKind {
    pub fn build<T: Codec + 'static>(&self) -> Result<Box<dyn SubgraphQueue<T>>, QueueError> {
        Ok(match self {
            QueueKind::Memory => Box::new(MemoryQueue::new()),
            QueueKind::Fifo => Box::new(FifoQueue::new()),
            QueueKind::Virtual(config) => Box::new(VirtualPriorityQueue::new(config.clone())?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memory_queue_ties_are_fifo() {
        let mut q = MemoryQueue::new();
        q.enqueue('a', Priority::from([1.0])).unwrap();
        q.enqueue('b', Priority::from([2.0])).unwrap();
        q.enqueue('c', Priority::from([1.0])).unwrap();
        q.enqueue('d', Priority::from([2.0])).unwrap();
        let order: Vec<char> = std::iter::from_fn(|| q.dequeue_max().unwrap().map(|x| x.0)).collect();
        assert_eq!(order, ['b', 'd', 'a', 'c']);
    }

    #[test]
    fn fifo_ignores_priority() {
        let mut q = FifoQueue::new();
        q.enqueue(1, Priority::from([1.0])).unwrap();
        q.enqueue(2, Priority::from([9.0])).unwrap();
        assert_eq!(q.dequeue_max().unwrap().unwrap().0, 1);
        assert_eq!(q.len(), 1);
    }
}
