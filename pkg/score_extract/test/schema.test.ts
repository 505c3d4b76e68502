import { describe, expect, it } from 'vitest';
import { parseCsv, formatCsv } from '../src/csv.js';
import { encodeDataset, inferSchema, parsesNumeric, shuffleHeaders } from '../src/schema.js';

describe('parseCsv', () => {
  it('parses simple tables', () => {
    const { header, rows } = parseCsv('a,b\n1,2\n3,4\n');
    expect(header).toEqual(['a', 'b']);
    expect(rows).toEqual([
      ['1', '2'],
      ['3', '4'],
    ]);
  });

  it('handles quoted fields with commas and quotes', () => {
    const { rows } = parseCsv('a,b\n"x,y","he said ""hi"""\n');
    expect(rows).toEqual([['x,y', 'he said "hi"']]);
  });

  it('round-trips through formatCsv', () => {
    const table = { header: ['a', 'b'], rows: [['x,y', '2'], ['', 'q"r']] };
    expect(parseCsv(formatCsv(table))).toEqual(table);
  });
});

describe('inferSchema', () => {
  it('marks a column categorical when any non-empty cell is non-numeric', () => {
    const table = parseCsv('A,target\n1.5,yes\n2,no\nx,yes\n');
    expect(inferSchema(table, 'target').columns[0].kind).toBe('categorical');
  });

  it('sorts distinct class labels', () => {
    const table = parseCsv('age,income\n20,>50K\n30,<=50K\n');
    expect(inferSchema(table, 'income').classLabels).toEqual(['<=50K', '>50K']);
  });

  it('rejects more than 5 classes', () => {
    const rows = Array.from({ length: 6 }, (_, i) => `${i},c${i}`).join('\n');
    const table = parseCsv('x,y\n' + rows + '\n');
    expect(() => inferSchema(table, 'y')).toThrow(/too many classes/);
  });

  it('accepts scientific notation and empty cells as numeric', () => {
    const table = parseCsv('a,y\n1.5,p\n,q\n2e-3,p\n');
    expect(inferSchema(table, 'y').columns[0].kind).toBe('numeric');
    expect(parsesNumeric('2e-3')).toBe(true);
    expect(parsesNumeric('x3')).toBe(false);
  });
});

describe('encodeDataset', () => {
  it('codes categoricals by first appearance and maps empty cells to NaN', () => {
    const table = parseCsv('c,n,y\nb,1.5,p\na,,q\nb,2,p\n');
    const ds = encodeDataset(table, inferSchema(table, 'y'));
    expect(ds.features.map((r) => r[0])).toEqual([0, 1, 0]);
    expect(Number.isNaN(ds.features[1][1])).toBe(true);
    expect(ds.labels).toEqual([0, 1, 0]);
    expect(ds.rowIds).toEqual([0, 1, 2]);
  });

  it('rejects unknown target labels', () => {
    const table = parseCsv('a,y\n1,p\n2,z\n');
    const schema = { columns: [{ name: 'a', kind: 'numeric' as const }], target: 'y', classLabels: ['p', 'q'] };
    expect(() => encodeDataset(table, schema)).toThrow(/unknown target label/);
  });
});

describe('shuffleHeaders', () => {
  it('permutes names but keeps kinds, order and target', () => {
    const table = parseCsv('a,b,c,y\n1,x,2,p\n2,z,3,q\n');
    const schema = inferSchema(table, 'y');
    const shuffled = shuffleHeaders(schema, 11);
    expect(shuffled.columns.map((c) => c.kind)).toEqual(schema.columns.map((c) => c.kind));
    expect([...shuffled.columns.map((c) => c.name)].sort()).toEqual(
      [...schema.columns.map((c) => c.name)].sort(),
    );
    expect(shuffled.target).toBe('y');
  });

  it('is deterministic in the seed', () => {
    const table = parseCsv('a,b,y\n1,2,p\n2,3,q\n');
    const schema = inferSchema(table, 'y');
    expect(shuffleHeaders(schema, 5)).toEqual(shuffleHeaders(schema, 5));
  });
});
