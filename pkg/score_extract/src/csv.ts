/** Minimal quote-aware CSV reading/writing (comma-delimited, UTF-8). */

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const records: string[][] = [];
  let field = '';
  let record: string[] = [];
  let inQuotes = false;
  let i = 0;
  const push = () => {
    record.push(field);
    field = '';
  };
  const endRecord = () => {
    push();
    if (record.length > 1 || record[0] !== '') records.push(record);
    record = [];
  };
  while (i < text.length) {
    const c = text[i];
    if (inQuotes) {
      if (c === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 2;
          continue;
        }
        inQuotes = false;
        i += 1;
        continue;
      }
      field += c;
      i += 1;
      continue;
    }
    if (c === '"' && field === '') {
      inQuotes = true;
      i += 1;
    } else if (c === ',') {
      push();
      i += 1;
    } else if (c === '\n') {
      endRecord();
      i += 1;
    } else if (c === '\r') {
      i += 1; // swallow; \r\n handled by the \n branch
    } else {
      field += c;
      i += 1;
    }
  }
  if (field !== '' || record.length > 0) endRecord();
  if (records.length === 0) throw new Error('empty CSV input');
  const [header, ...rows] = records;
  return { header, rows };
}

function escapeField(value: string): string {
  if (/[",\n\r]/.test(value)) return '"' + value.replace(/"/g, '""') + '"';
  return value;
}

export function formatCsv(table: CsvTable): string {
  const lines = [table.header, ...table.rows].map((r) => r.map(escapeField).join(','));
  return lines.join('\n') + '\n';
}
