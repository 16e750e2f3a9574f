//! Canonical binary encoding shared by all proof and digest types.
//!
//! Conventions: multi-byte integers are big-endian; variable-length fields
//! carry a `u32` big-endian length prefix; arbitrary-precision integers are
//! minimal big-endian magnitudes (zero encodes as the empty string) with an
//! explicit sign byte for signed values; group elements use the curve's
//! canonical compressed encoding.

use num_bigint::{BigInt, BigUint, Sign};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WireError {
    #[error("input truncated")]
    Truncated,
    #[error("trailing bytes after payload")]
    TrailingBytes,
    #[error("length prefix exceeds remaining input")]
    LengthOverrun,
    #[error("malformed field: {0}")]
    Malformed(&'static str),
}

pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Writer { buf: Vec::new() }
    }

    pub fn put_u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn put_u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_be_bytes());
    }

    pub fn put_raw(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    /// Length-prefixed byte string.
    pub fn put_bytes(&mut self, bytes: &[u8]) {
        self.put_u32(bytes.len() as u32);
        self.put_raw(bytes);
    }

    /// Length-prefixed minimal big-endian magnitude; zero is empty.
    pub fn put_uint(&mut self, v: &BigUint) {
        if v.bits() == 0 {
            self.put_u32(0);
        } else {
            self.put_bytes(&v.to_bytes_be());
        }
    }

    /// Sign byte (0 non-negative, 1 negative) then the magnitude.
    pub fn put_int(&mut self, v: &BigInt) {
        self.put_u8(if v.sign() == Sign::Minus { 1 } else { 0 });
        self.put_uint(v.magnitude());
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

impl Default for Writer {
    fn default() -> Self {
        Self::new()
    }
}

pub struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Reader { data, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        if self.remaining() < n {
            return Err(WireError::Truncated);
        }
        let out = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn get_u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take(1)?[0])
    }

    pub fn get_u32(&mut self) -> Result<u32, WireError> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    pub fn get_u64(&mut self) -> Result<u64, WireError> {
        let b = self.take(8)?;
        let mut a = [0u8; 8];
        a.copy_from_slice(b);
        Ok(u64::from_be_bytes(a))
    }

    pub fn get_bytes(&mut self) -> Result<&'a [u8], WireError> {
        let len = self.get_u32()? as usize;
        if self.remaining() < len {
            return Err(WireError::LengthOverrun);
        }
        self.take(len)
    }

    pub fn get_uint(&mut self) -> Result<BigUint, WireError> {
        let bytes = self.get_bytes()?;
        if !bytes.is_empty() && bytes[0] == 0 {
            return Err(WireError::Malformed("non-minimal integer encoding"));
        }
        Ok(BigUint::from_bytes_be(bytes))
    }

    pub fn get_int(&mut self) -> Result<BigInt, WireError> {
        let sign = self.get_u8()?;
        let mag = self.get_uint()?;
        match sign {
            0 => Ok(BigInt::from(mag)),
            1 => {
                if mag.bits() == 0 {
                    return Err(WireError::Malformed("negative zero"));
                }
                Ok(-BigInt::from(mag))
            }
            _ => Err(WireError::Malformed("bad sign byte")),
        }
    }

    /// Fixed-width array read, for compressed group elements.
    pub fn get_array<const N: usize>(&mut self) -> Result<[u8; N], WireError> {
        let mut out = [0u8; N];
        out.copy_from_slice(self.take(N)?);
        Ok(out)
    }

    /// A count prefix that will be used to size allocations. Bounded by the
    /// remaining input so hostile prefixes cannot trigger huge reservations.
    pub fn get_count(&mut self, min_elem_size: usize) -> Result<usize, WireError> {
        let n = self.get_u32()? as usize;
        if n.saturating_mul(min_elem_size.max(1)) > self.remaining() {
            return Err(WireError::LengthOverrun);
        }
        Ok(n)
    }

    pub fn finish(self) -> Result<(), WireError> {
        if self.remaining() == 0 {
            Ok(())
        } else {
            Err(WireError::TrailingBytes)
        }
    }
}
