//! Test-only reference model: a bit-list DES driven by the plain-text table
//! file, sharing no code with the library's table-driven path.

#![allow(dead_code)]

use std::collections::HashMap;

pub const TABLES_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tables/fips46-3.tables");

/// SHA-256 of `tables/fips46-3.tables`.
pub const TABLES_SHA256: &str = "6879eae2c406a4f7af735230744a942462d82efebad39f3581dd702612fcec97";

pub struct Tables {
    pub perms: HashMap<String, (u8, Vec<u8>)>,
    pub shifts: Vec<u8>,
    pub sboxes: [[[u8; 16]; 4]; 8],
}

pub fn load_tables() -> Tables {
    let text = std::fs::read_to_string(TABLES_PATH).expect("table file");
    let mut perms = HashMap::new();
    let mut shifts = Vec::new();
    let mut sboxes = [[[0u8; 16]; 4]; 8];
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, body) = line.split_once(':').expect("table line has ':'");
        let nums: Vec<u8> = body.split_whitespace().map(|n| n.parse().unwrap()).collect();
        let head: Vec<&str> = head.split_whitespace().collect();
        match head.as_slice() {
            ["SHIFTS"] => shifts = nums,
            [sbox, row] if sbox.starts_with('S') && row.starts_with('R') => {
                let b: usize = sbox[1..].parse().unwrap();
                let r: usize = row[1..].parse().unwrap();
                sboxes[b - 1][r].copy_from_slice(&nums);
            }
            [name, width] => {
                perms.insert(name.to_string(), (width.parse().unwrap(), nums));
            }
            other => panic!("unexpected table header {other:?}"),
        }
    }
    Tables { perms, shifts, sboxes }
}

fn to_bits(v: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (v >> (n - 1 - i)) & 1 == 1).collect()
}

fn from_bits(b: &[bool]) -> u64 {
    b.iter().fold(0, |acc, &x| (acc << 1) | u64::from(x))
}

pub struct Oracle {
    t: Tables,
}

impl Oracle {
    pub fn new() -> Self {
        Oracle { t: load_tables() }
    }

    fn perm(&self, name: &str, input: &[bool]) -> Vec<bool> {
        let (_, src) = &self.t.perms[name];
        src.iter().map(|&s| input[usize::from(s) - 1]).collect()
    }

    pub fn subkeys(&self, key: u64) -> Vec<Vec<bool>> {
        let cd = self.perm("PC-1", &to_bits(key, 64));
        let (mut c, mut d) = (cd[..28].to_vec(), cd[28..].to_vec());
        let mut out = Vec::new();
        for &s in &self.t.shifts {
            c.rotate_left(usize::from(s));
            d.rotate_left(usize::from(s));
            let joined: Vec<bool> = c.iter().chain(d.iter()).copied().collect();
            out.push(self.perm("PC-2", &joined));
        }
        out
    }

    pub fn subkey_values(&self, key: u64) -> Vec<u64> {
        self.subkeys(key).iter().map(|k| from_bits(k)).collect()
    }

    fn f(&self, r: &[bool], k: &[bool]) -> Vec<bool> {
        let x: Vec<bool> = self.perm("E", r).iter().zip(k).map(|(a, b)| a ^ b).collect();
        let mut s = Vec::new();
        for g in 0..8 {
            let b = &x[6 * g..6 * g + 6];
            let row = 2 * usize::from(b[0]) + usize::from(b[5]);
            let col = from_bits(&b[1..5]) as usize;
            s.extend(to_bits(u64::from(self.t.sboxes[g][row][col]), 4));
        }
        self.perm("P", &s)
    }

    /// Returns the output and the (L, R) halves after IP and after each round.
    pub fn run(&self, block: u64, key: u64, decrypt: bool) -> (u64, Vec<(u32, u32)>) {
        let mut ks = self.subkeys(key);
        if decrypt {
            ks.reverse();
        }
        let b = self.perm("IP", &to_bits(block, 64));
        let (mut l, mut r) = (b[..32].to_vec(), b[32..].to_vec());
        let mut halves = vec![(from_bits(&l) as u32, from_bits(&r) as u32)];
        for k in &ks {
            let f = self.f(&r, k);
            let nr: Vec<bool> = l.iter().zip(&f).map(|(a, b)| a ^ b).collect();
            l = std::mem::replace(&mut r, nr);
            halves.push((from_bits(&l) as u32, from_bits(&r) as u32));
        }
        let pre: Vec<bool> = r.iter().chain(l.iter()).copied().collect();
        (from_bits(&self.perm("FP", &pre)), halves)
    }

    pub fn encrypt(&self, block: u64, key: u64) -> u64 {
        self.run(block, key, false).0
    }

    pub fn decrypt(&self, block: u64, key: u64) -> u64 {
        self.run(block, key, true).0
    }
}
