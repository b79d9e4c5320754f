//! Checksums for frames: CRC-16 (poly 0x1021, init 0xFFFF, unreflected) per
//! payload chunk and CRC-32 (IEEE, reflected) over the whole frame.

const fn crc16_table() -> [u16; 256] {
    let mut table = [0u16; 256];
    let mut i = 0;
    while i < 256 {
        let mut c = (i as u16) << 8;
        let mut b = 0;
        while b < 8 {
            c = if c & 0x8000 != 0 { (c << 1) ^ 0x1021 } else { c << 1 };
            b += 1;
        }
        table[i] = c;
        i += 1;
    }
    table
}

static CRC16: [u16; 256] = crc16_table();

pub fn crc16(data: &[u8]) -> u16 {
    data.iter().fold(0xFFFF, |c, &b| (c << 8) ^ CRC16[((c >> 8) as u8 ^ b) as usize])
}

pub fn crc32(data: &[u8]) -> u32 {
    crc32fast::hash(data)
}
