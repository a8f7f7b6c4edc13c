//! Frozen serialized images, written out byte by byte from the format
//! definition — never from the encoder — so any drift in the on-disk
//! layout fails loudly.

use sliceset::slicing::CHUNK_SPAN;
use sliceset::{PcEfList, RoaringLiteSet, SlicedSet, SortedSequence};

fn seq(values: Vec<u32>, universe: u32) -> SortedSequence {
    SortedSequence::new(values, universe).unwrap()
}

/// 32 values below 56: one sparse chunk holding one bitmap block.
#[test]
fn sliced_mixed_density_block() {
    let values = vec![
        0, 1, 4, 5, 6, 17, 18, 19, 20, 21, 22, 24, 27, 31, 34, 35, 37, 38, 39, 40, 41, 42, 43,
        44, 45, 46, 47, 50, 52, 53, 54, 55,
    ];
    let set = SlicedSet::build(&seq(values.clone(), 55));

    #[rustfmt::skip]
    let mut expect = vec![
        0, 0,                      // one chunk
        0, 0, 31, 0, 34, 0, 3, 0,  // id 0, 32 values, 34 payload bytes, sparse, one block
        0, 31,                     // block directory: id 0, 32 values -> bitmap
        0x73, 0x00, 0x7E, 0x89, 0xEC, 0xFF, 0xF4, // bits 0..56
    ];
    expect.extend([0u8; 25]); // the rest of the 32-byte block bitmap
    assert_eq!(expect.len(), 44);

    assert_eq!(set.to_bytes(), expect);
    assert_eq!(set.size_bytes(), 44);
    let restored = SlicedSet::from_bytes(expect).unwrap();
    assert_eq!(restored.decode(), values);
}

/// A chunk holding all 65536 of its values stores no payload at all.
#[test]
fn sliced_full_chunk_is_header_only() {
    let values: Vec<u32> = (0..CHUNK_SPAN).collect();
    let set = SlicedSet::build(&seq(values.clone(), CHUNK_SPAN - 1));

    let expect = vec![
        0, 0, // one chunk
        0, 0, 255, 255, 0, 0, 1, 0, // id 0, 65536 values, 0 payload bytes, full
    ];
    assert_eq!(expect.len(), 10);

    assert_eq!(set.to_bytes(), expect);
    assert_eq!(set.size_bytes(), 10);
    let restored = SlicedSet::from_bytes(expect).unwrap();
    assert_eq!(restored.len(), CHUNK_SPAN as usize);
    assert_eq!(restored.decode(), values);
}

/// One set exercising every container shape at once: a sparse chunk with
/// an array block and a bitmap block, a full chunk, and a dense chunk.
#[test]
fn sliced_all_shapes_fixture() {
    let mut values: Vec<u32> = vec![1, 5, 9]; // chunk 0, block 0: array
    values.extend(512..552); // chunk 0, block 2: 40 values -> bitmap
    values.extend(CHUNK_SPAN..2 * CHUNK_SPAN); // chunk 1: full
    values.extend(2 * CHUNK_SPAN..2 * CHUNK_SPAN + 32_768); // chunk 2: dense
    let set = SlicedSet::build(&seq(values.clone(), 2 * CHUNK_SPAN + 32_768));

    #[rustfmt::skip]
    let mut expect = vec![
        2, 0,                          // three chunks
        0, 0, 42, 0, 39, 0, 3, 1,      // chunk 0: 43 values, 39 bytes, sparse, two blocks
        1, 0, 255, 255, 0, 0, 1, 0,    // chunk 1: full
        2, 0, 255, 127, 0, 32, 2, 0,   // chunk 2: 32768 values, 8192 bytes, dense
        0, 2, 2, 39,                   // chunk 0 block directory
        1, 5, 9,                       // block 0 payload: raw low bytes
    ];
    expect.extend([0xFFu8; 5]); // block 2 payload: bits 0..40 of the 512..552 range
    expect.extend([0u8; 27]);
    expect.extend([0xFFu8; 4096]); // chunk 2 payload: lower half solid
    expect.extend([0u8; 4096]);
    assert_eq!(expect.len(), 2 + 3 * 8 + 39 + 8192);

    assert_eq!(set.to_bytes(), expect);
    let restored = SlicedSet::from_bytes(expect).unwrap();
    assert_eq!(restored.decode(), values);
    assert_eq!(restored.universe(), 2 * CHUNK_SPAN + 32_767);
}

/// Elias-Fano with a hand-computed payload: seven primes under 25 give a
/// one-bit low part and ones at positions 8,9,11,13,16,18,25.
#[test]
fn pcef_seven_primes() {
    let values = vec![2, 3, 5, 7, 11, 13, 24];
    let list = PcEfList::build(&seq(values.clone(), 24));

    #[rustfmt::skip]
    let expect = vec![
        7, 0, 0, 0,             // elements
        1, 0, 0, 0,             // partitions
        24, 0, 0, 0,            // skip: partition maximum
        0, 0, 0, 0,             // payload offset
        0x3E, 0x2B, 0x05, 0x02, // 7 low bits, then the high section
    ];
    assert_eq!(list.to_bytes(), expect);
    assert_eq!(list.size_bytes(), 20);
    let restored = PcEfList::from_bytes(&expect).unwrap();
    assert_eq!(restored.decode(), values);
}

/// The chunked baseline: three values in one array container.
#[test]
fn roaring_three_values() {
    let values = vec![1, 2, 3];
    let set = RoaringLiteSet::build(&seq(values.clone(), 3));

    let expect = vec![
        0, 0, // one chunk
        0, 0, 2, 0, // id 0, three values
        1, 0, 2, 0, 3, 0, // sorted u16 payload
    ];
    assert_eq!(set.to_bytes(), expect);
    assert_eq!(set.size_bytes(), 12);
    let restored = RoaringLiteSet::from_bytes(&expect).unwrap();
    assert_eq!(restored.decode(), values);
}
