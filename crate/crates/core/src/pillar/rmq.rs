//! Range-minimum over a `u32` array: sparse table on block minima plus
//! in-block scans.

const BLOCK: usize = 32;

#[derive(Debug, Clone)]
pub struct BlockRmq {
    values: Vec<u32>,
    // table[level][b] = min of block minima b .. b + 2^level
    table: Vec<Vec<u32>>,
}

impl BlockRmq {
    pub fn new(values: Vec<u32>) -> Self {
        let blocks: Vec<u32> = values
            .chunks(BLOCK)
            .map(|c| c.iter().copied().min().unwrap_or(u32::MAX))
            .collect();
        let mut table = vec![blocks];
        let mut width = 1;
        while 2 * width <= table[0].len() {
            let prev = table.last().unwrap();
            let next: Vec<u32> = (0..prev.len() - width)
                .map(|i| prev[i].min(prev[i + width]))
                .collect();
            table.push(next);
            width *= 2;
        }
        BlockRmq { values, table }
    }

    /// Minimum of `values[lo..=hi]`.
    #[inline]
    pub fn min(&self, lo: usize, hi: usize) -> u32 {
        debug_assert!(lo <= hi && hi < self.values.len());
        let (bl, bh) = (lo / BLOCK, hi / BLOCK);
        if bl == bh {
            return scan(&self.values[lo..=hi]);
        }
        let mut best =
            scan(&self.values[lo..(bl + 1) * BLOCK]).min(scan(&self.values[bh * BLOCK..=hi]));
        if bl + 1 < bh {
            let (a, b) = (bl + 1, bh - 1);
            let level = (usize::BITS - 1 - (b - a + 1).leading_zeros()) as usize;
            let row = &self.table[level];
            best = best.min(row[a]).min(row[b + 1 - (1 << level)]);
        }
        best
    }
}

#[inline]
fn scan(xs: &[u32]) -> u32 {
    xs.iter().copied().min().unwrap_or(u32::MAX)
}
