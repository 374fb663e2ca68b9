/// FNV-1a 64-bit hash, used for content fingerprints in manifests.
///
/// Not cryptographic; chosen because it is dependency-free and stable
/// across platforms, which is all a reproducibility fingerprint needs.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(PRIME);
    }
    hash
}
