/** CLI: `score-extract extract-llm ...` and `score-extract extract-tabpfn ...`
 * produce score files for the benchmark from a dataset CSV plus (for shots and
 * split selection) a split manifest. `--api-base stub:` selects deterministic
 * offline stand-ins for dry runs. */

import { parseArgs } from 'node:util';
import { readFileSync } from 'node:fs';
import { parseCsv } from './csv.js';
import { inferSchema, shuffleHeaders, encodeDataset, TableSchema } from './schema.js';
import { buildPrompt, makeTemplate, selectShots, ShotRow } from './prompt.js';
import { llmClassScores, tabpfnScores, CausalScoringHandle, TabpfnHandle } from './scoring.js';
import { makeCausalHandle, makeTabpfnHandle } from './handles.js';
import { readSplitManifest, manifestKey } from './manifest.js';
import { writeScoreFile } from './scorefile.js';

export interface HandleFactory {
  causal(apiBase: string, model: string, contextChars: number): CausalScoringHandle;
  tabpfn(apiBase: string): TabpfnHandle;
}

const defaultFactory: HandleFactory = {
  causal: makeCausalHandle,
  tabpfn: makeTabpfnHandle,
};

function usage(): string {
  return [
    'usage: score-extract <verb> [options]',
    '',
    'verbs:',
    '  extract-llm      score every dataset row with a causal LM (mean-reduced',
    '                   cross-entropy per class label, negated)',
    '  extract-tabpfn   score a split (train+val+test rows) with a TabPFN service',
    '',
    'common options: --data <csv> --target <col> --out <scores.csv> --api-base <url|stub:>',
    'extract-llm:     --model <id> --shots <k=3> --shot-seed <n=0> --instruction <text>',
    '                 --context-chars <n=0> --shuffle-headers-seed <n>',
    '                 --manifest <csv> --dataset-name <n> --size <s> --seed <n>  (for shots)',
    'extract-tabpfn:  --manifest <csv> --dataset-name <n> --size <s> --seed <n>',
    '                 --subsample-seed <n=0>',
  ].join('\n');
}

interface LoadedData {
  schema: TableSchema;
  header: string[];
  rows: string[][];
  featureCells: string[][]; // per row, cells in schema column order
}

function loadData(dataPath: string, target: string, shuffleSeed?: number): LoadedData {
  const table = parseCsv(readFileSync(dataPath, 'utf8'));
  let schema = inferSchema(table, target);
  if (shuffleSeed !== undefined) schema = shuffleHeaders(schema, shuffleSeed);
  // cells are looked up by original header order; shuffled schemas rename
  // columns in place, so shuffled names pair with unshuffled values
  const original = inferSchema(table, target);
  const colIdx = original.columns.map((c) => table.header.indexOf(c.name));
  const featureCells = table.rows.map((row) => colIdx.map((j) => row[j]));
  return { schema, header: table.header, rows: table.rows, featureCells };
}

function requireSplit(values: Record<string, string | undefined>, manifestRequired: string) {
  for (const key of ['manifest', 'dataset-name', 'size', 'seed']) {
    if (!values[key]) throw new Error(`--${key} is required ${manifestRequired}`);
  }
  const splits = readSplitManifest(values['manifest']!);
  const key = manifestKey(values['dataset-name']!, values['size']!, Number(values['seed']!));
  const split = splits.get(key);
  if (!split) {
    throw new Error(
      `manifest has no split for dataset=${values['dataset-name']} size=${values.size} seed=${values.seed}`,
    );
  }
  return split;
}

async function extractLlm(values: Record<string, string | undefined>, factory: HandleFactory) {
  const data = loadData(values.data!, values.target!,
    values['shuffle-headers-seed'] === undefined ? undefined : Number(values['shuffle-headers-seed']));
  const shots = Number(values.shots ?? '3');
  const shotSeed = Number(values['shot-seed'] ?? '0');
  const template = makeTemplate(data.schema, shots, values.instruction);
  const handle = factory.causal(
    values['api-base'] ?? 'stub:',
    values.model ?? 'unknown',
    Number(values['context-chars'] ?? '0'),
  );

  let shotRows: ShotRow[] = [];
  if (shots > 0) {
    const split = requireSplit(values, 'when --shots > 0 (shot examples come from the training split)');
    const targetIdx = data.header.indexOf(values.target!);
    const shotIds = selectShots(split.train, shots, shotSeed);
    shotRows = shotIds.map((rid) => ({
      values: data.featureCells[rid],
      label: data.rows[rid][targetIdx],
    }));
  }

  const scores: number[][] = [];
  for (let rid = 0; rid < data.rows.length; rid++) {
    const prompt = buildPrompt(template, data.schema, data.featureCells[rid], shotRows);
    try {
      scores.push(await llmClassScores(prompt, data.schema.classLabels, handle));
    } catch (err) {
      throw new Error(`row ${rid}: ${(err as Error).message}`);
    }
  }
  writeScoreFile(values.out!, {
    rowIds: data.rows.map((_, i) => i),
    scores,
    classLabels: data.schema.classLabels,
    source: 'llm',
    model: handle.id,
  });
  console.log(`wrote ${values.out} (${scores.length} rows, ${data.schema.classLabels.length} classes)`);
}

async function extractTabpfn(values: Record<string, string | undefined>, factory: HandleFactory) {
  const data = loadData(values.data!, values.target!);
  const split = requireSplit(values, 'for extract-tabpfn');
  const dataset = encodeDataset(
    { header: data.header, rows: data.rows },
    data.schema,
  );
  const handle = factory.tabpfn(values['api-base'] ?? 'stub:');
  const result = await tabpfnScores(dataset, split, handle, Number(values['subsample-seed'] ?? '0'));
  writeScoreFile(values.out!, {
    rowIds: result.rowIds,
    scores: result.scores,
    classLabels: data.schema.classLabels,
    source: 'tabpfn',
    model: handle.id,
  });
  console.log(
    `wrote ${values.out} (${result.rowIds.length} rows, ` +
      `${result.contextRowIds.length} in-context rows)`,
  );
}

export async function runCli(argv: string[], factory: HandleFactory = defaultFactory): Promise<number> {
  const [verb, ...rest] = argv;
  if (!verb || verb === '--help' || verb === '-h') {
    console.log(usage());
    return verb ? 0 : 1;
  }
  const { values } = parseArgs({
    args: rest,
    options: {
      data: { type: 'string' },
      target: { type: 'string' },
      out: { type: 'string' },
      'api-base': { type: 'string' },
      model: { type: 'string' },
      shots: { type: 'string' },
      'shot-seed': { type: 'string' },
      instruction: { type: 'string' },
      'context-chars': { type: 'string' },
      'shuffle-headers-seed': { type: 'string' },
      manifest: { type: 'string' },
      'dataset-name': { type: 'string' },
      size: { type: 'string' },
      seed: { type: 'string' },
      'subsample-seed': { type: 'string' },
    },
  });
  for (const key of ['data', 'target', 'out']) {
    if (!values[key as 'data']) {
      console.error(`--${key} is required\n\n${usage()}`);
      return 1;
    }
  }
  try {
    if (verb === 'extract-llm') await extractLlm(values, factory);
    else if (verb === 'extract-tabpfn') await extractTabpfn(values, factory);
    else {
      console.error(`unknown verb ${JSON.stringify(verb)}\n\n${usage()}`);
      return 1;
    }
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  runCli(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
