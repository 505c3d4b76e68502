/** Table schema handling mirroring the benchmark's CSV contract: a column is
 * numeric iff every non-empty cell parses as a decimal number; class labels
 * are the sorted distinct target values (2..5 of them). */

import { CsvTable } from './csv.js';
import { Rng } from './rng.js';

export type ColumnKind = 'numeric' | 'categorical';

export interface ColumnSpec {
  name: string;
  kind: ColumnKind;
}

export interface TableSchema {
  columns: ColumnSpec[];
  target: string;
  classLabels: string[];
}

const MAX_CLASSES = 5;
// mirrors Python float(): decimal/scientific forms plus nan/inf spellings
const FLOAT_RE = /^[+-]?((\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?|nan|inf(inity)?)$/i;

export function parsesNumeric(cell: string): boolean {
  return FLOAT_RE.test(cell.trim());
}

export function inferSchema(table: CsvTable, target: string): TableSchema {
  const targetIdx = table.header.indexOf(target);
  if (targetIdx < 0) throw new Error(`target column ${JSON.stringify(target)} not found`);
  if (table.rows.length === 0) throw new Error('no data rows');

  const columns: ColumnSpec[] = [];
  table.header.forEach((name, j) => {
    if (j === targetIdx) return;
    const numeric = table.rows.every((row) => row[j] === '' || parsesNumeric(row[j]));
    columns.push({ name, kind: numeric ? 'numeric' : 'categorical' });
  });

  const labels = [...new Set(table.rows.map((row) => row[targetIdx]))].sort();
  if (labels.includes('')) throw new Error('empty target value');
  if (labels.length > MAX_CLASSES) throw new Error(`too many classes (${labels.length} > ${MAX_CLASSES})`);
  if (labels.length < 2) throw new Error('target has a single value');
  return { columns, target, classLabels: labels };
}

/** Permute feature column *names* uniformly; kinds, column order and the
 * target stay put (the header-shuffle ablation). */
export function shuffleHeaders(schema: TableSchema, seed: number): TableSchema {
  if (schema.columns.length < 2) throw new Error('need at least 2 feature columns to shuffle');
  const perm = new Rng(seed).permutation(schema.columns.length);
  const names = schema.columns.map((c) => c.name);
  return {
    ...schema,
    columns: schema.columns.map((c, i) => ({ name: names[perm[i]], kind: c.kind })),
  };
}

export interface EncodedDataset {
  /** row-major numeric matrix; categoricals as first-appearance codes, NaN missing */
  features: number[][];
  labels: number[];
  rowIds: number[];
  schema: TableSchema;
}

/** Encode a table the way the benchmark's loader does, for TabPFN input. */
export function encodeDataset(table: CsvTable, schema: TableSchema): EncodedDataset {
  const targetIdx = table.header.indexOf(schema.target);
  if (targetIdx < 0) throw new Error(`target column ${JSON.stringify(schema.target)} not found`);
  const colIdx = schema.columns.map((c) => {
    const j = table.header.indexOf(c.name);
    if (j < 0) throw new Error(`schema column ${JSON.stringify(c.name)} not found`);
    return j;
  });
  const labelIdx = new Map(schema.classLabels.map((l, k) => [l, k]));
  const codes = schema.columns.map(() => new Map<string, number>());

  const features: number[][] = [];
  const labels: number[] = [];
  table.rows.forEach((row, i) => {
    if (row.length !== table.header.length) {
      throw new Error(`ragged row ${i}: ${row.length} cells, expected ${table.header.length}`);
    }
    const label = labelIdx.get(row[targetIdx]);
    if (label === undefined) throw new Error(`row ${i}: unknown target label ${JSON.stringify(row[targetIdx])}`);
    labels.push(label);
    const enc = schema.columns.map((spec, j) => {
      const cell = row[colIdx[j]];
      if (cell === '') return NaN;
      if (spec.kind === 'numeric') {
        if (!parsesNumeric(cell)) throw new Error(`row ${i}: unparseable numeric cell ${JSON.stringify(cell)}`);
        return Number(cell);
      }
      const table_ = codes[j];
      if (!table_.has(cell)) table_.set(cell, table_.size);
      return table_.get(cell)!;
    });
    features.push(enc);
  });
  return { features, labels, rowIds: table.rows.map((_, i) => i), schema };
}
