/**
 * Teacher review state: editable (concept, score) rows, draft approval
 * checkboxes, a dirty flag for leave prompts, and the edit payload
 * builder. Saving is disabled while any score field is negative or
 * non-numeric, mirroring the service's validation.
 */

import type { ConceptEdit, Question } from './types';

export interface ReviewRow {
  stems: string[];
  display: string;
  scoreField: string;
  originalScore: number;
  remove: boolean;
  added: boolean;
}

export interface DraftRow {
  text: string;
  approve: boolean;
}

export interface TeacherReviewState {
  questionId: string;
  rows: ReviewRow[];
  drafts: DraftRow[];
  dirty: boolean;
}

export function initReview(question: Question): TeacherReviewState {
  return {
    questionId: question.id,
    rows: question.concepts.map((concept) => ({
      stems: [...concept.stems],
      display: concept.display,
      scoreField: String(concept.score),
      originalScore: concept.score,
      remove: false,
      added: false,
    })),
    drafts: question.drafts.map((draft) => ({ text: draft.text, approve: false })),
    dirty: false,
  };
}

export function editScore(state: TeacherReviewState, row: number, value: string): TeacherReviewState {
  const rows = state.rows.map((r, i) => (i === row ? { ...r, scoreField: value } : r));
  return { ...state, rows, dirty: true };
}

export function toggleRemove(state: TeacherReviewState, row: number): TeacherReviewState {
  const rows = state.rows.map((r, i) => (i === row ? { ...r, remove: !r.remove } : r));
  return { ...state, rows, dirty: true };
}

export function addConcept(state: TeacherReviewState, phrase: string, score: string): TeacherReviewState {
  const row: ReviewRow = {
    stems: [],
    display: phrase.trim(),
    scoreField: score,
    originalScore: NaN,
    remove: false,
    added: true,
  };
  return { ...state, rows: [...state.rows, row], dirty: true };
}

export function toggleDraft(state: TeacherReviewState, index: number): TeacherReviewState {
  const drafts = state.drafts.map((d, i) => (i === index ? { ...d, approve: !d.approve } : d));
  return { ...state, drafts, dirty: true };
}

export function rowError(row: ReviewRow): string | null {
  if (row.remove) {
    return null;
  }
  if (row.scoreField.trim() === '' || Number.isNaN(Number(row.scoreField))) {
    return 'score must be a number';
  }
  if (Number(row.scoreField) < 0) {
    return 'score must be non-negative';
  }
  if (row.added && row.display === '') {
    return 'concept text required';
  }
  return null;
}

export function canSave(state: TeacherReviewState): boolean {
  if (state.rows.some((row) => rowError(row) !== null)) {
    return false;
  }
  return state.rows.some((row) => !row.remove);
}

export function shouldWarnOnLeave(state: TeacherReviewState): boolean {
  return state.dirty;
}

export function approvedDraftIndices(state: TeacherReviewState): number[] {
  return state.drafts.flatMap((draft, i) => (draft.approve ? [i] : []));
}

/** Only actual changes become edits; untouched rows produce nothing. */
export function buildEdits(state: TeacherReviewState): ConceptEdit[] {
  const edits: ConceptEdit[] = [];
  for (const row of state.rows) {
    if (row.added) {
      if (!row.remove) {
        edits.push({ action: 'add', phrase: row.display, score: Number(row.scoreField) });
      }
      continue;
    }
    if (row.remove) {
      edits.push({ action: 'delete', stems: row.stems });
      continue;
    }
    const score = Number(row.scoreField);
    if (score !== row.originalScore) {
      edits.push({ action: 'set', stems: row.stems, score });
    }
  }
  return edits;
}
