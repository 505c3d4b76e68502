import { describe, expect, it } from 'vitest';
import { buildPrompt, makeTemplate, selectShots, serializeRow } from '../src/prompt.js';
import { shuffleHeaders, TableSchema } from '../src/schema.js';

const schema: TableSchema = {
  columns: [
    { name: 'age', kind: 'numeric' },
    { name: 'sex', kind: 'categorical' },
  ],
  target: 'income',
  classLabels: ['greater than 50K', 'less than or equal to 50K'],
};

describe('serializeRow', () => {
  it('renders name: value pairs ending in Answer:', () => {
    expect(serializeRow(['17', 'Male'], schema)).toBe('age: 17, sex: Male, Answer:');
  });

  it('appends the label text on shot examples', () => {
    const text = serializeRow(['17', 'Male'], schema, { label: 'less than or equal to 50K' });
    expect(text).toBe('age: 17, sex: Male, Answer: less than or equal to 50K');
    expect(text.endsWith('Answer: less than or equal to 50K')).toBe(true);
  });

  it('respects a custom serialization order', () => {
    expect(serializeRow(['17', 'Male'], schema, { order: ['sex', 'age'] })).toBe(
      'sex: Male, age: 17, Answer:',
    );
  });

  it('serializes shuffled header names against unshuffled values', () => {
    let swapped = schema;
    for (let seed = 0; seed < 50; seed++) {
      swapped = shuffleHeaders(schema, seed);
      if (swapped.columns[0].name !== 'age') break;
    }
    expect(swapped.columns.map((c) => c.name)).toEqual(['sex', 'age']);
    // values stay positional: the first cell is still the age value
    expect(serializeRow(['17', 'Male'], swapped)).toBe('sex: 17, age: Male, Answer:');
  });
});

describe('buildPrompt', () => {
  it('assembles instruction, numbered examples and the query row', () => {
    const template = makeTemplate(schema, 1, 'Predict the income bracket.');
    const prompt = buildPrompt(template, schema, ['24', 'Female'], [
      { values: ['17', 'Male'], label: 'less than or equal to 50K' },
    ]);
    expect(prompt).toBe(
      [
        'Predict the income bracket.',
        '',
        'Example 1 -',
        'age: 17, sex: Male, Answer: less than or equal to 50K',
        '',
        'age: 24, sex: Female, Answer:',
      ].join('\n'),
    );
  });

  it('rejects options that disagree with the schema', () => {
    const template = { instruction: 'x', options: ['a', 'b'], shots: 0 };
    expect(() => buildPrompt(template, schema, ['1', '2'], [])).toThrow(/options/);
  });

  it('is deterministic in the shot seed', () => {
    const train = [4, 9, 11, 20, 33, 41, 57];
    expect(selectShots(train, 3, 7)).toEqual(selectShots(train, 3, 7));
    expect(selectShots(train, 3, 7)).not.toEqual(selectShots(train, 3, 8));
    expect(selectShots(train, 0, 7)).toEqual([]);
  });

  it('shot picks come from the training split', () => {
    const train = [4, 9, 11];
    for (let seed = 0; seed < 10; seed++) {
      for (const rid of selectShots(train, 2, seed)) {
        expect(train).toContain(rid);
      }
    }
  });
});
