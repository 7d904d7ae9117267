use std::collections::{BinaryHeap, VecDeque};
use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::marker::PhantomData;
use std::path::{Path, PathBuf};

use tempfile::TempDir;

use super::{Entry, QueueError, SubgraphQueue};
use crate::codec::{put_f64, put_len, put_u64, Codec, CodecError, Reader};
use crate::engine::Priority;

#[derive(Clone, Debug)]
pub struct VpqConfig {
    /// In-memory record threshold; crossing it spills the lower half to a run.
    pub max_mem_entries: usize,
    /// Runs are written to a private subdirectory created inside this directory.
    pub spill_dir: PathBuf,
    /// Records fetched per read when draining a run.
    pub read_buffer_records: usize,
}

impl VpqConfig {
    pub fn new(max_mem_entries: usize, spill_dir: impl Into<PathBuf>) -> Self {
        VpqConfig {
            max_mem_entries,
            spill_dir: spill_dir.into(),
            read_buffer_records: 4096,
        }
    }
}

impl Default for VpqConfig {
    fn default() -> Self {
        VpqConfig::new(1_000_000, std::env::temp_dir())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VpqStats {
    pub spills: u64,
    pub records_spilled: u64,
    /// Highest in-memory record count ever observed (transiently `max_mem_entries + 1`).
    pub peak_in_memory: usize,
    pub read_ops: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunInfo {
    pub path: PathBuf,
    pub records: u64,
    pub consumed: u64,
    pub read_ops: u64,
}

struct RawRecord {
    priority: Priority,
    seq: u64,
    payload: Vec<u8>,
}

struct Block {
    len: usize,
    records: usize,
}

/// A sealed, descending-sorted run file drained through a small read buffer.
struct SpilledRun {
    path: PathBuf,
    records: u64,
    consumed: u64,
    file: Option<File>,
    blocks: VecDeque<Block>,
    buffer: VecDeque<RawRecord>,
    read_ops: u64,
}

impl SpilledRun {
    fn refill(&mut self) -> Result<(), QueueError> {
        let Some(block) = self.blocks.pop_front() else {
            return Ok(());
        };
        let io_err = |source| QueueError::Io {
            path: self.path.clone(),
            source,
        };
        let file = match &mut self.file {
            Some(f) => f,
            None => self.file.insert(File::open(&self.path).map_err(io_err)?),
        };
        let mut bytes = vec![0u8; block.len];
        self.read_ops += 1;
        file.read_exact(&mut bytes).map_err(|source| QueueError::Io {
            path: self.path.clone(),
            source,
        })?;
        let corrupt = |source| QueueError::Corrupt {
            path: self.path.clone(),
            source,
        };
        let mut reader = Reader::new(&bytes);
        for _ in 0..block.records {
            self.buffer.push_back(decode_record(&mut reader).map_err(corrupt)?);
        }
        reader.finish().map_err(corrupt)?;
        Ok(())
    }

    fn front(&self) -> Option<&RawRecord> {
        self.buffer.front()
    }

    fn exhausted(&self) -> bool {
        self.buffer.is_empty() && self.blocks.is_empty()
    }
}

/// Record layout: `u32 arity; arity × f64 priority; u64 seq; u32 payload_len; payload`.
fn encode_record(out: &mut Vec<u8>, priority: &Priority, seq: u64, payload: &[u8]) {
    put_len(out, priority.arity());
    for &x in priority.values() {
        put_f64(out, x);
    }
    put_u64(out, seq);
    put_len(out, payload.len());
    out.extend_from_slice(payload);
}

fn decode_record(reader: &mut Reader<'_>) -> Result<RawRecord, CodecError> {
    let arity = reader.count(8)?;
    let values = (0..arity).map(|_| reader.f64()).collect::<Result<Vec<_>, _>>()?;
    let seq = reader.u64()?;
    let len = reader.count(1)?;
    let payload = reader.take(len)?.to_vec();
    Ok(RawRecord {
        priority: Priority::new(values),
        seq,
        payload,
    })
}

/// Reads every record of a run file as `(priority, seq, payload)`.
pub fn read_run_file(path: &Path) -> Result<Vec<(Priority, u64, Vec<u8>)>, QueueError> {
    let bytes = fs::read(path).map_err(|source| QueueError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = Reader::new(&bytes);
    let mut out = Vec::new();
    while reader.remaining() > 0 {
        let r = decode_record(&mut reader).map_err(|source| QueueError::Corrupt {
            path: path.to_path_buf(),
            source,
        })?;
        out.push((r.priority, r.seq, r.payload));
    }
    Ok(out)
}

/// A max-priority queue that keeps at most `max_mem_entries` records in memory.
///
/// When an enqueue pushes the in-memory heap past the threshold, the lower-priority
/// half is written to disk as an immutable run sorted by decreasing priority. Runs
/// are merged lazily at dequeue time through their front records. Ties dequeue in
/// enqueue order across memory and runs alike. Run files are removed on drop.
pub struct VirtualPriorityQueue<T> {
    config: VpqConfig,
    dir: Option<TempDir>,
    heap: BinaryHeap<Entry<T>>,
    runs: Vec<SpilledRun>,
    heads: BinaryHeap<Entry<usize>>,
    next_seq: u64,
    next_run: u64,
    len: usize,
    poisoned: bool,
    stats: VpqStats,
    _marker: PhantomData<T>,
}

impl<T: Codec> VirtualPriorityQueue<T> {
    pub fn new(config: VpqConfig) -> Result<Self, QueueError> {
        if config.max_mem_entries < 2 {
            return Err(QueueError::Config("max_mem_entries must be at least 2".into()));
        }
        if config.read_buffer_records < 1 {
            return Err(QueueError::Config("read_buffer_records must be at least 1".into()));
        }
        Ok(VirtualPriorityQueue {
            config,
            dir: None,
            heap: BinaryHeap::new(),
            runs: Vec::new(),
            heads: BinaryHeap::new(),
            next_seq: 0,
            next_run: 0,
            len: 0,
            poisoned: false,
            stats: VpqStats::default(),
            _marker: PhantomData,
        })
    }

    pub fn stats(&self) -> &VpqStats {
        &self.stats
    }

    pub fn in_memory_len(&self) -> usize {
        self.heap.len()
    }

    pub fn runs(&self) -> Vec<RunInfo> {
        self.runs
            .iter()
            .map(|r| RunInfo {
                path: r.path.clone(),
                records: r.records,
                consumed: r.consumed,
                read_ops: r.read_ops,
            })
            .collect()
    }

    /// Directory holding this queue's run files, once the first spill created it.
    pub fn run_dir(&self) -> Option<&Path> {
        self.dir.as_ref().map(TempDir::path)
    }

    fn ensure_dir(&mut self) -> Result<PathBuf, QueueError> {
        if let Some(dir) = &self.dir {
            return Ok(dir.path().to_path_buf());
        }
        let io_err = |source| QueueError::Io {
            path: self.config.spill_dir.clone(),
            source,
        };
        fs::create_dir_all(&self.config.spill_dir).map_err(io_err)?;
        let dir = tempfile::Builder::new()
            .prefix("subquest-vpq-")
            .tempdir_in(&self.config.spill_dir)
            .map_err(io_err)?;
        let path = dir.path().to_path_buf();
        self.dir = Some(dir);
        Ok(path)
    }

    /// Writes the lower-priority half (`⌊n/2⌋` records) of the in-memory heap to a
    /// new run. Does nothing with fewer than two records in memory.
    pub fn spill(&mut self) -> Result<(), QueueError> {
        if self.poisoned {
            return Err(QueueError::Unusable);
        }
        let n = self.heap.len();
        if n < 2 {
            return Ok(());
        }
        let mut sorted = std::mem::take(&mut self.heap).into_sorted_vec();
        sorted.reverse();
        let cold = sorted.split_off(n - n / 2);
        self.heap = BinaryHeap::from(sorted);

        let result = self.write_run(&cold);
        if result.is_err() {
            self.poisoned = true;
        }
        result
    }

    fn write_run(&mut self, cold: &[Entry<T>]) -> Result<(), QueueError> {
        let dir = self.ensure_dir()?;
        let path = dir.join(format!("run-{}.bin", self.next_run));
        self.next_run += 1;
        let io_err = |source| QueueError::Io {
            path: path.clone(),
            source,
        };
        let mut writer = BufWriter::new(File::create(&path).map_err(io_err)?);
        let mut blocks = VecDeque::new();
        let mut buf = Vec::new();
        let mut payload = Vec::new();
        for chunk in cold.chunks(self.config.read_buffer_records) {
            buf.clear();
            for entry in chunk {
                payload.clear();
                entry.item.encode(&mut payload);
                encode_record(&mut buf, &entry.priority, entry.seq, &payload);
            }
            writer.write_all(&buf).map_err(io_err)?;
            blocks.push_back(Block {
                len: buf.len(),
                records: chunk.len(),
            });
        }
        writer.flush().map_err(io_err)?;
        drop(writer);

        let mut run = SpilledRun {
            path: path.clone(),
            records: cold.len() as u64,
            consumed: 0,
            file: None,
            blocks,
            buffer: VecDeque::new(),
            read_ops: 0,
        };
        run.refill()?;
        self.stats.spills += 1;
        self.stats.records_spilled += cold.len() as u64;
        self.stats.read_ops += run.read_ops;
        let idx = self.runs.len();
        if let Some(front) = run.front() {
            self.heads.push(Entry {
                priority: front.priority.clone(),
                seq: front.seq,
                item: idx,
            });
        }
        self.runs.push(run);
        Ok(())
    }

    fn pop_from_run(&mut self, idx: usize) -> Result<(T, Priority), QueueError> {
        let run = &mut self.runs[idx];
        let record = run
            .buffer
            .pop_front()
            .expect("run head without a buffered record");
        run.consumed += 1;
        if run.buffer.is_empty() {
            let before = run.read_ops;
            let refilled = run.refill();
            self.stats.read_ops += run.read_ops - before;
            refilled?;
        }
        if let Some(front) = run.front() {
            self.heads.push(Entry {
                priority: front.priority.clone(),
                seq: front.seq,
                item: idx,
            });
        } else if run.exhausted() {
            run.file = None;
            let _ = fs::remove_file(&run.path);
        }
        let item = T::from_bytes(&record.payload).map_err(|source| QueueError::Corrupt {
            path: self.runs[idx].path.clone(),
            source,
        })?;
        Ok((item, record.priority))
    }
}

impl<T: Codec> SubgraphQueue<T> for VirtualPriorityQueue<T> {
    fn enqueue(&mut self, item: T, priority: Priority) -> Result<(), QueueError> {
        if self.poisoned {
            return Err(QueueError::Unusable);
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Entry {
            priority,
            seq,
            item,
        });
        self.len += 1;
        self.stats.peak_in_memory = self.stats.peak_in_memory.max(self.heap.len());
        if self.heap.len() > self.config.max_mem_entries {
            self.spill()?;
        }
        Ok(())
    }

    fn dequeue_max(&mut self) -> Result<Option<(T, Priority)>, QueueError> {
        if self.poisoned {
            return Err(QueueError::Unusable);
        }
        let from_memory = match (self.heap.peek(), self.heads.peek()) {
            (None, None) => return Ok(None),
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(mem), Some(head)) => {
                (&mem.priority, std::cmp::Reverse(mem.seq))
                    > (&head.priority, std::cmp::Reverse(head.seq))
            }
        };
        self.len -= 1;
        if from_memory {
            let entry = self.heap.pop().expect("peeked entry");
            return Ok(Some((entry.item, entry.priority)));
        }
        let head = self.heads.pop().expect("peeked head");
        self.pop_from_run(head.item).map(Some)
    }

    fn len(&self) -> usize {
        self.len
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn queue(max: usize, dir: &Path) -> VirtualPriorityQueue<u32> {
        VirtualPriorityQueue::new(VpqConfig::new(max, dir)).unwrap()
    }

    #[test]
    fn five_into_four_spills_two() {
        let tmp = tempfile::tempdir().unwrap();
        let mut q = queue(4, tmp.path());
        for i in 0..5u32 {
            q.enqueue(i, Priority::from([i as f64])).unwrap();
        }
        let runs = q.runs();
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0].records, 2);
        assert_eq!(q.in_memory_len(), 3);
        let files: Vec<_> = fs::read_dir(q.run_dir().unwrap()).unwrap().collect();
        assert_eq!(files.len(), 1);
    }

    #[test]
    fn spill_writes_lower_half_descending() {
        let tmp = tempfile::tempdir().unwrap();
        let mut q = queue(10, tmp.path());
        for (i, p) in [5.0, 9.0, 3.0, 7.0].into_iter().enumerate() {
            q.enqueue(i as u32, Priority::from([p])).unwrap();
        }
        q.spill().unwrap();
        let run = &q.runs()[0];
        assert_eq!(run.path.file_name().unwrap(), "run-0.bin");
        let records = read_run_file(&run.path).unwrap();
        let spilled: Vec<f64> = records.iter().map(|r| r.0.values()[0]).collect();
        assert_eq!(spilled, [5.0, 3.0]);
        let mut kept: Vec<f64> = q.heap.iter().map(|e| e.priority.values()[0]).collect();
        kept.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(kept, [9.0, 7.0]);
    }

    #[test]
    fn run_record_layout() {
        let tmp = tempfile::tempdir().unwrap();
        let mut q = queue(10, tmp.path());
        q.enqueue(0xAB, Priority::from([2.0])).unwrap();
        q.enqueue(0xCD, Priority::from([1.0])).unwrap();
        q.spill().unwrap();
        let bytes = fs::read(&q.runs()[0].path).unwrap();
        let mut expected = Vec::new();
        expected.extend_from_slice(&1u32.to_le_bytes());
        expected.extend_from_slice(&1.0f64.to_le_bytes());
        expected.extend_from_slice(&1u64.to_le_bytes());
        expected.extend_from_slice(&4u32.to_le_bytes());
        expected.extend_from_slice(&0xCDu32.to_le_bytes());
        assert_eq!(bytes, expected);
    }

    #[test]
    fn n_two_spills_one() {
        let tmp = tempfile::tempdir().unwrap();
        let mut q = queue(10, tmp.path());
        q.enqueue(1, Priority::from([1.0])).unwrap();
        q.enqueue(2, Priority::from([2.0])).unwrap();
        q.spill().unwrap();
        assert_eq!(q.runs()[0].records, 1);
        assert_eq!(q.dequeue_max().unwrap().unwrap().0, 2);
        assert_eq!(q.dequeue_max().unwrap().unwrap().0, 1);
        assert!(q.dequeue_max().unwrap().is_none());
    }

    #[test]
    fn run_head_beats_memory_head() {
        let tmp = tempfile::tempdir().unwrap();
        let mut q = queue(10, tmp.path());
        q.enqueue(5, Priority::from([5.0])).unwrap();
        q.enqueue(6, Priority::from([6.0])).unwrap();
        q.spill().unwrap();
        q.enqueue(4, Priority::from([4.0])).unwrap();
        q.enqueue(7, Priority::from([7.0])).unwrap();
        q.spill().unwrap();
        q.enqueue(3, Priority::from([3.0])).unwrap();
        let order: Vec<u32> =
            std::iter::from_fn(|| q.dequeue_max().unwrap().map(|(x, _)| x)).collect();
        assert_eq!(order, [7, 6, 5, 4, 3]);
        assert!(q.is_empty());
    }

    #[test]
    fn ties_keep_enqueue_order_across_runs() {
        let tmp = tempfile::tempdir().unwrap();
        let mut q = queue(2, tmp.path());
        for i in 0..9u32 {
            q.enqueue(i, Priority::from([1.0])).unwrap();
        }
        assert!(q.stats().spills > 0);
        let order: Vec<u32> =
            std::iter::from_fn(|| q.dequeue_max().unwrap().map(|(x, _)| x)).collect();
        assert_eq!(order, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn buffered_reads_are_bounded() {
        let tmp = tempfile::tempdir().unwrap();
        let mut config = VpqConfig::new(100, tmp.path());
        config.read_buffer_records = 7;
        let mut q = VirtualPriorityQueue::<u32>::new(config).unwrap();
        for i in 0..101u32 {
            q.enqueue(i, Priority::from([(i % 13) as f64])).unwrap();
        }
        while q.dequeue_max().unwrap().is_some() {}
        for run in q.runs() {
            assert_eq!(run.consumed, run.records);
            assert!(run.read_ops <= run.records.div_ceil(7));
            assert!(!run.path.exists());
        }
    }

    #[test]
    fn truncated_run_is_reported() {
        let tmp = tempfile::tempdir().unwrap();
        let mut config = VpqConfig::new(10, tmp.path());
        config.read_buffer_records = 1;
        let mut q = VirtualPriorityQueue::<u32>::new(config).unwrap();
        for i in 0..4u32 {
            q.enqueue(i, Priority::from([i as f64])).unwrap();
        }
        q.spill().unwrap();
        let path = q.runs()[0].path.clone();
        let len = fs::metadata(&path).unwrap().len();
        fs::OpenOptions::new()
            .write(true)
            .open(&path)
            .unwrap()
            .set_len(len - 2)
            .unwrap();
        let mut errors = 0;
        for _ in 0..4 {
            if q.dequeue_max().is_err() {
                errors += 1;
            }
        }
        assert!(errors > 0);
    }

    #[test]
    fn run_files_removed_on_drop() {
        let tmp = tempfile::tempdir().unwrap();
        let mut q = queue(2, tmp.path());
        for i in 0..6u32 {
            q.enqueue(i, Priority::from([i as f64])).unwrap();
        }
        let dir = q.run_dir().unwrap().to_path_buf();
        assert!(dir.exists());
        drop(q);
        assert!(!dir.exists());
    }

    #[test]
    fn rejects_tiny_threshold() {
        let tmp = tempfile::tempdir().unwrap();
        assert!(VirtualPriorityQueue::<u32>::new(VpqConfig::new(1, tmp.path())).is_err());
    }
}
