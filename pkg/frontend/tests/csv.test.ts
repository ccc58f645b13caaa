import { describe, expect, it } from "vitest";

import { filterRows, numberColumn, parseCsv, stringColumn } from "../src/csv.js";
import { EmptySeries, MissingColumn } from "../src/errors.js";

describe("parseCsv", () => {
  it("parses header and rows", () => {
    const table = parseCsv("a,b\n1,2\n3,4\n");
    expect(table.header).toEqual(["a", "b"]);
    expect(table.rows).toEqual([
      ["1", "2"],
      ["3", "4"],
    ]);
  });

  it("tolerates trailing newline and CRLF", () => {
    const table = parseCsv("a,b\r\n1,2\r\n");
    expect(table.rows).toEqual([["1", "2"]]);
  });

  it("rejects empty input", () => {
    expect(() => parseCsv("")).toThrow(EmptySeries);
  });
});

describe("columns", () => {
  const table = parseCsv("h,value,tag\n0.5,1.25,x\n0.25,2.5,y\n");

  it("extracts string and numeric columns", () => {
    expect(stringColumn(table, "tag")).toEqual(["x", "y"]);
    expect(numberColumn(table, "value")).toEqual([1.25, 2.5]);
  });

  it("raises MissingColumn with the available names", () => {
    expect(() => numberColumn(table, "nope")).toThrow(MissingColumn);
    expect(() => numberColumn(table, "nope")).toThrow(/h, value, tag/);
  });

  it("filters rows by value", () => {
    const sub = filterRows(table, "tag", "y");
    expect(sub.rows).toEqual([["0.25", "2.5", "y"]]);
  });
});
