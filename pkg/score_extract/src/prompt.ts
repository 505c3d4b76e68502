/** Few-shot prompt construction: rows serialize to `name: value` pairs ending
 * in `, Answer:`; shot examples additionally carry the label text. Prompt
 * construction is deterministic given (schema, shot seed, shot count). */

import { TableSchema } from './schema.js';
import { Rng } from './rng.js';

export interface PromptTemplate {
  /** Task instruction shown once at the top. */
  instruction: string;
  /** Answer options; must equal the schema's class labels exactly. */
  options: string[];
  /** Number of in-context examples (default 3). */
  shots: number;
  /** Serialization order of feature columns (defaults to schema order). */
  order?: string[];
}

export interface ShotRow {
  values: string[]; // feature cells in schema column order
  label: string;
}

export function defaultInstruction(target: string, options: string[]): string {
  return (
    `Given information about a record, you must predict the value of ${target}. ` +
    `Answer with one of the following: ${options.join(' | ')}.`
  );
}

export function makeTemplate(schema: TableSchema, shots = 3, instruction?: string): PromptTemplate {
  return {
    instruction: instruction ?? defaultInstruction(schema.target, schema.classLabels),
    options: [...schema.classLabels],
    shots,
  };
}

function orderedIndices(schema: TableSchema, order?: string[]): number[] {
  if (!order) return schema.columns.map((_, j) => j);
  return order.map((name) => {
    const j = schema.columns.findIndex((c) => c.name === name);
    if (j < 0) throw new Error(`unknown column ${JSON.stringify(name)} in serialization order`);
    return j;
  });
}

/** `age: 17, sex: Male, Answer:` — optionally with the label appended. */
export function serializeRow(
  values: string[],
  schema: TableSchema,
  opts: { label?: string; order?: string[] } = {},
): string {
  const pairs = orderedIndices(schema, opts.order).map(
    (j) => `${schema.columns[j].name}: ${values[j]}`,
  );
  const suffix = opts.label === undefined ? ' Answer:' : ` Answer: ${opts.label}`;
  return pairs.join(', ') + ',' + suffix;
}

function checkTemplate(template: PromptTemplate, schema: TableSchema): void {
  const same =
    template.options.length === schema.classLabels.length &&
    template.options.every((o, i) => o === schema.classLabels[i]);
  if (!same) throw new Error('template options must equal the schema class labels in order');
  if (template.shots < 0) throw new Error('shot count must be >= 0');
}

/** Pick the shot rows once per dataset: a seeded draw from the training split,
 * reused verbatim for every scored row. */
export function selectShots(trainIndices: number[], k: number, seed: number): number[] {
  if (k === 0) return [];
  const rng = new Rng(seed);
  const picked = rng.sampleIndices(trainIndices.length, Math.min(k, trainIndices.length));
  return picked.map((i) => trainIndices[i]);
}

export function buildPrompt(
  template: PromptTemplate,
  schema: TableSchema,
  row: string[],
  shotRows: ShotRow[],
): string {
  checkTemplate(template, schema);
  const parts = [template.instruction, ''];
  shotRows.forEach((shot, i) => {
    parts.push(`Example ${i + 1} -`);
    parts.push(serializeRow(shot.values, schema, { label: shot.label, order: template.order }));
    parts.push('');
  });
  parts.push(serializeRow(row, schema, { order: template.order }));
  return parts.join('\n');
}
