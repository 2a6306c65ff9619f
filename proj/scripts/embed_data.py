#!/usr/bin/env python3
"""Embed the data/ tables into a C++ translation unit (run by the build)."""

import sys


def main():
    out = sys.argv[1]
    named = [a.split("=", 1) for a in sys.argv[2:]]
    with open(out, "w") as f:
        f.write("// generated by scripts/embed_data.py -- do not edit\n")
        f.write("namespace fastmtgp::embedded {\n")
        for name, path in named:
            with open(path) as src:
                text = src.read()
            if ")RAW(" in text:
                raise SystemExit(f"{path}: cannot embed, contains raw-string sentinel")
            f.write(f'extern const char* const {name};\n')
            f.write(f'const char* const {name} = R"RAW({text})RAW";\n')
        f.write("}\n")


if __name__ == "__main__":
    main()
