#!/usr/bin/env python3
"""Convert a spreadsheet of prices into the delimiter-separated input format.

Example:
    python3 tools/xls_to_csv.py glanbia.xls glanbia.csv --column 1
"""
import argparse

import pandas as pd


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("src", help="spreadsheet file (.xls/.xlsx)")
    ap.add_argument("dst", help="output csv")
    ap.add_argument("--sheet", default=0, help="sheet name or index")
    ap.add_argument("--column", default="1", help="price column name or 0-based index")
    ap.add_argument("--header-row", type=int, default=None, help="row holding column names (default: none)")
    args = ap.parse_args()

    sheet = int(args.sheet) if str(args.sheet).isdigit() else args.sheet
    frame = pd.read_excel(args.src, sheet_name=sheet, header=args.header_row)
    col = frame.iloc[:, int(args.column)] if args.column.isdigit() else frame[args.column]
    prices = pd.to_numeric(col, errors="coerce").dropna()
    prices = prices[prices > 0]
    pd.DataFrame({"price": prices.to_numpy()}).to_csv(args.dst, index=False)
    print(f"wrote {len(prices)} prices to {args.dst}")


if __name__ == "__main__":
    main()
