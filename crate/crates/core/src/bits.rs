//! MSB-first bit streams and the Elias-gamma / zigzag integer codes.

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitWriter {
    bytes: Vec<u8>,
    len: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of bits written so far.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn write_bit(&mut self, bit: bool) {
        let offset = (self.len % 8) as u8;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> offset;
        }
        self.len += 1;
    }

    /// Writes the low `width` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        for i in (0..width).rev() {
            self.write_bit((value >> i) & 1 == 1);
        }
    }

    /// Elias gamma code of `value >= 1`: `floor(log2 v)` zeros, then `v` in
    /// binary.
    pub fn write_gamma(&mut self, value: u64) {
        assert!(value >= 1, "Elias gamma is undefined for 0");
        let width = 64 - value.leading_zeros();
        for _ in 1..width {
            self.write_bit(false);
        }
        self.write_bits(value, width);
    }

    /// Bytes plus the number of zero padding bits in the last byte.
    pub fn finish(self) -> (Vec<u8>, u8) {
        let padding = ((8 - self.len % 8) % 8) as u8;
        (self.bytes, padding)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutOfBits {
    pub offset: u64,
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    len: u64,
    pos: u64,
}

impl<'a> BitReader<'a> {
    /// Reads the first `len` bits of `bytes`.
    pub fn new(bytes: &'a [u8], len: u64) -> Self {
        let len = len.min(bytes.len() as u64 * 8);
        Self { bytes, len, pos: 0 }
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn remaining(&self) -> u64 {
        self.len - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool, OutOfBits> {
        if self.pos >= self.len {
            return Err(OutOfBits { offset: self.pos });
        }
        let byte = self.bytes[(self.pos / 8) as usize];
        let bit = byte & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, width: u32) -> Result<u64, OutOfBits> {
        if self.remaining() < u64::from(width) {
            return Err(OutOfBits { offset: self.pos });
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | u64::from(self.read_bit()?);
        }
        Ok(v)
    }

    /// Reads one gamma codeword. Fails on truncation or a prefix longer than
    /// 63 zeros.
    pub fn read_gamma(&mut self) -> Result<u64, OutOfBits> {
        let start = self.pos;
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 63 {
                return Err(OutOfBits { offset: start });
            }
        }
        let rest = self.read_bits(zeros)?;
        Ok((1u64 << zeros) | rest)
    }
}

/// Interleaves signed values onto the naturals: 0, -1, 1, -2, ... → 0, 1, 2, 3, ...
pub fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

pub fn unzigzag(u: u64) -> i64 {
    ((u >> 1) as i64) ^ -((u & 1) as i64)
}
