/** The score-file format consumed by the benchmark:
 *   # source=<llm|tabpfn|synthetic> model=<text>
 *   row_id,<class_0>,...,<class_{K-1}>
 *   0,-1.25,0.5
 * Values are raw (uncentered); JS number formatting is shortest-round-trip, so
 * the Python reader reproduces every float bit-exactly. */

import { writeFileSync, readFileSync } from 'node:fs';

export type ScoreSource = 'llm' | 'tabpfn' | 'synthetic';

export interface ScoreFile {
  rowIds: number[];
  scores: number[][];
  classLabels: string[];
  source: ScoreSource;
  model: string;
}

export function formatScoreFile(file: ScoreFile): string {
  if (file.rowIds.length !== file.scores.length) {
    throw new Error('rowIds and scores must have the same length');
  }
  for (const row of file.scores) {
    if (row.length !== file.classLabels.length) {
      throw new Error('every score row must have one value per class label');
    }
    if (!row.every(Number.isFinite)) throw new Error('scores must be finite');
  }
  const seen = new Set(file.rowIds);
  if (seen.size !== file.rowIds.length) throw new Error('row ids must be unique');

  const lines: string[] = [];
  let comment = `# source=${file.source}`;
  if (file.model) comment += ` model=${file.model}`;
  lines.push(comment);
  lines.push('row_id,' + file.classLabels.join(','));
  file.rowIds.forEach((rid, i) => {
    lines.push(String(rid) + ',' + file.scores[i].map((v) => String(v)).join(','));
  });
  return lines.join('\n') + '\n';
}

export function writeScoreFile(path: string, file: ScoreFile): void {
  writeFileSync(path, formatScoreFile(file), 'utf8');
}

export function readScoreFile(path: string, classLabels: string[]): ScoreFile {
  const lines = readFileSync(path, 'utf8')
    .split('\n')
    .filter((ln) => ln.trim() !== '');
  if (lines.length === 0) throw new Error(`${path}: empty score file`);
  let source: ScoreSource = 'synthetic';
  let model = '';
  if (lines[0].startsWith('#')) {
    for (const token of lines[0].slice(1).trim().split(/\s+/)) {
      if (token.startsWith('source=')) source = token.slice('source='.length) as ScoreSource;
      else if (token.startsWith('model=')) model = token.slice('model='.length);
    }
    lines.shift();
  }
  const header = lines[0].split(',');
  if (header[0] !== 'row_id') throw new Error(`${path}: first header field must be 'row_id'`);
  const fileLabels = header.slice(1);
  const matches =
    fileLabels.length === classLabels.length && fileLabels.every((l, i) => l === classLabels[i]);
  if (!matches) {
    throw new Error(
      `${path}: class names [${fileLabels}] do not match schema classes [${classLabels}]`,
    );
  }
  const rowIds: number[] = [];
  const scores: number[][] = [];
  for (const ln of lines.slice(1)) {
    const parts = ln.split(',');
    if (parts.length !== header.length) throw new Error(`${path}: ragged score row`);
    rowIds.push(Number(parts[0]));
    scores.push(parts.slice(1).map(Number));
  }
  return { rowIds, scores, classLabels: fileLabels, source, model };
}
