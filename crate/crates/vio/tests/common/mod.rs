#![allow(dead_code)]

use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use des_vio::ParseErrorKind;

pub const DES_KEY: &str = "133457799BBCDFF1";
pub const TDES_KEYS: [&str; 3] = ["0123456789ABCDEF", "23456789ABCDEF01", "456789ABCDEF0123"];
pub const IV: &str = "A1B2C3D4E5F60718";

pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Outcome {
    pub fn stdout_text(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }
}

/// Runs the `tdes` binary with `args`, feeding `stdin`.
pub fn tdes(args: &[&str], stdin: &[u8]) -> Outcome {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tdes"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn tdes");
    // The child may exit before reading its input.
    let _ = child.stdin.take().unwrap().write_all(stdin);
    let out = child.wait_with_output().unwrap();
    Outcome {
        code: out.status.code().expect("exited normally"),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn key_args(algo: &str) -> Vec<String> {
    let mut v = vec!["--algo".to_owned(), algo.to_owned()];
    if algo == "des" {
        v.extend(["--key".to_owned(), DES_KEY.to_owned()]);
    } else {
        for (flag, key) in ["--key", "--key2", "--key3"].iter().zip(TDES_KEYS) {
            v.extend([flag.to_string(), key.to_owned()]);
        }
    }
    v
}

/// Encrypts then decrypts `data` through files in `dir`; returns the
/// recovered bytes and the ciphertext.
pub fn file_round_trip(dir: &Path, algo: &str, mode: &str, data: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let tag = format!("{algo}-{mode}-{}", data.len());
    let plain = dir.join(format!("{tag}.in"));
    let cipher = dir.join(format!("{tag}.enc"));
    let back = dir.join(format!("{tag}.out"));
    std::fs::write(&plain, data).unwrap();

    let mut common = key_args(algo);
    common.extend(["--mode".to_owned(), mode.to_owned(), "--pad".to_owned(), "pkcs7".to_owned()]);
    if mode == "cbc" {
        common.extend(["--iv".to_owned(), IV.to_owned()]);
    }
    for (cmd, from, to) in [("encrypt", &plain, &cipher), ("decrypt", &cipher, &back)] {
        let mut args: Vec<String> = vec![cmd.to_owned()];
        args.extend(common.iter().cloned());
        args.extend([
            "--in".to_owned(),
            from.display().to_string(),
            "--out".to_owned(),
            to.display().to_string(),
        ]);
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = tdes(&argv, &[]);
        assert_eq!(out.code, 0, "{cmd} {tag}: {}", out.stderr);
    }
    (std::fs::read(&back).unwrap(), std::fs::read(&cipher).unwrap())
}

pub struct Malformed {
    pub name: &'static str,
    pub text: &'static str,
    pub line: usize,
    pub matches: fn(&ParseErrorKind) -> bool,
}

/// One input per malformed class the parser distinguishes.
pub const MALFORMED: &[Malformed] = &[
    Malformed {
        name: "malformed hex",
        text: "[DES]\n[ENCRYPT]\nCOUNT = 0\nKEY = 133457799BBCDFG1\nPLAINTEXT = 0123456789ABCDEF\n",
        line: 4,
        matches: |k| matches!(k, ParseErrorKind::MalformedHex { field, .. } if field == "KEY"),
    },
    Malformed {
        name: "wrong width",
        text: "[DES]\n[ENCRYPT]\nCOUNT = 0\nKEY = 0123\n",
        line: 4,
        matches: |k| matches!(k, ParseErrorKind::WrongWidth { field, found: 4 } if field == "KEY"),
    },
    Malformed {
        name: "missing field",
        text: "[DES]\n[ENCRYPT]\n\nCOUNT = 7\nPLAINTEXT = 0123456789ABCDEF\n",
        line: 4,
        matches: |k| matches!(k, ParseErrorKind::MissingField("KEY")),
    },
    Malformed {
        name: "missing tdes key",
        text: "[TDES-EDE]\n[ENCRYPT]\nCOUNT = 0\nKEY1 = 0123456789ABCDEF\nKEY2 = 0123456789ABCDEF\nPLAINTEXT = 0123456789ABCDEF\n",
        line: 3,
        matches: |k| matches!(k, ParseErrorKind::MissingField("KEY3")),
    },
    Malformed {
        name: "missing input",
        text: "[DES]\n[DECRYPT]\nCOUNT = 0\nKEY = 133457799BBCDFF1\nPLAINTEXT = 0123456789ABCDEF\n",
        line: 3,
        matches: |k| matches!(k, ParseErrorKind::MissingField("CIPHERTEXT")),
    },
    Malformed {
        name: "unknown key",
        text: "[DES]\n[ENCRYPT]\nCOUNT = 0\nIV = 0000000000000000\n",
        line: 4,
        matches: |k| matches!(k, ParseErrorKind::UnknownKey(name) if name == "IV"),
    },
    Malformed {
        name: "unknown section",
        text: "# header\n[AES]\n",
        line: 2,
        matches: |k| matches!(k, ParseErrorKind::UnknownSection(name) if name == "AES"),
    },
    Malformed {
        name: "field outside vector",
        text: "[DES]\n[ENCRYPT]\nKEY = 133457799BBCDFF1\n",
        line: 3,
        matches: |k| matches!(k, ParseErrorKind::FieldOutsideVector(_)),
    },
    Malformed {
        name: "field for the wrong suite",
        text: "[DES]\n[ENCRYPT]\nCOUNT = 0\nKEY1 = 133457799BBCDFF1\n",
        line: 4,
        matches: |k| matches!(k, ParseErrorKind::UnexpectedField { field, .. } if field == "KEY1"),
    },
    Malformed {
        name: "duplicate field",
        text: "[DES]\n[ENCRYPT]\nCOUNT = 0\nKEY = 133457799BBCDFF1\nKEY = 133457799BBCDFF1\n",
        line: 5,
        matches: |k| matches!(k, ParseErrorKind::DuplicateField(name) if name == "KEY"),
    },
    Malformed {
        name: "bad count",
        text: "[DES]\n[ENCRYPT]\nCOUNT = seven\n",
        line: 3,
        matches: |k| matches!(k, ParseErrorKind::BadCount),
    },
    Malformed {
        name: "missing context",
        text: "[DES]\nCOUNT = 0\n",
        line: 2,
        matches: |k| matches!(k, ParseErrorKind::MissingContext("direction")),
    },
    Malformed {
        name: "malformed line",
        text: "[DES]\n[ENCRYPT]\nCOUNT = 0\nKEY 133457799BBCDFF1\n",
        line: 4,
        matches: |k| matches!(k, ParseErrorKind::MalformedLine),
    },
];
