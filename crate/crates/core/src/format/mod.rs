//! Wire and file formats: corpus files, the canonical schematic text, the
//! packed binary schematic, and length-prefixed stream-code frames.

mod corpus_file;
mod frame;
mod packed;
mod text;

pub use corpus_file::{read_bitlines, read_byte_items, write_bitlines, InputMode};
pub use frame::{frame_code, framed_len, read_frame, unframe_code};
pub use packed::{packed_bit_len, read_packed, write_packed, PACKED_MAGIC};
pub use text::{canonical_order, read_schematic, write_schematic, HEADER};
