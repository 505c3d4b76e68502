export { parseCsv, formatCsv } from './csv.js';
export { Rng } from './rng.js';
export {
  inferSchema,
  shuffleHeaders,
  encodeDataset,
  parsesNumeric,
} from './schema.js';
export type { TableSchema, ColumnSpec, ColumnKind, EncodedDataset } from './schema.js';
export {
  buildPrompt,
  defaultInstruction,
  makeTemplate,
  selectShots,
  serializeRow,
} from './prompt.js';
export type { PromptTemplate, ShotRow } from './prompt.js';
export { llmClassScores, tabpfnScores, PromptTooLongError } from './scoring.js';
export type {
  CausalScoringHandle,
  TabpfnHandle,
  TabpfnLimits,
  SplitRows,
  TabpfnResult,
} from './scoring.js';
export {
  EchoLogprobHandle,
  HttpTabpfnHandle,
  StubCausalHandle,
  StubTabpfnHandle,
  makeCausalHandle,
  makeTabpfnHandle,
} from './handles.js';
export { formatScoreFile, writeScoreFile, readScoreFile } from './scorefile.js';
export type { ScoreFile, ScoreSource } from './scorefile.js';
export { readSplitManifest, manifestKey } from './manifest.js';
export { runCli } from './cli.js';
export type { HandleFactory } from './cli.js';
