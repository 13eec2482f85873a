/**
 * Student answer flow state machine. Before grading only the question
 * title is visible (no sources, no concepts); after grading the view is
 * built purely from the returned AnswerResult and recommendation list.
 * A failed submit keeps the transcript buffer for retry.
 */

import type { AnswerResult, SubmitResponse } from './types';

export type AnswerPhase = 'prompt' | 'submitting' | 'graded' | 'failed';

export interface StudentAnswerState {
  questionId: string;
  title: string;
  transcript: string;
  phase: AnswerPhase;
  result: AnswerResult | null;
  recommendations: string[];
  error: string | null;
}

export function initAnswer(questionId: string, title: string): StudentAnswerState {
  return {
    questionId,
    title,
    transcript: '',
    phase: 'prompt',
    result: null,
    recommendations: [],
    error: null,
  };
}

export function setTranscript(state: StudentAnswerState, text: string): StudentAnswerState {
  return { ...state, transcript: text };
}

export function appendDictation(state: StudentAnswerState, text: string): StudentAnswerState {
  const joined = state.transcript === '' ? text : `${state.transcript} ${text}`;
  return { ...state, transcript: joined };
}

/** Empty submissions are legal (graded 0) but deserve a confirmation. */
export function needsEmptyConfirmation(state: StudentAnswerState): boolean {
  return state.transcript.trim() === '';
}

export function beginSubmit(state: StudentAnswerState): StudentAnswerState {
  return { ...state, phase: 'submitting', error: null };
}

export function submitSucceeded(state: StudentAnswerState, response: SubmitResponse): StudentAnswerState {
  return {
    ...state,
    phase: 'graded',
    result: response.result,
    recommendations: [...response.recommendations],
  };
}

export function submitFailed(state: StudentAnswerState, message: string): StudentAnswerState {
  // transcript intentionally preserved so the student can retry
  return { ...state, phase: 'failed', error: message };
}

/** Everything a student may see before grading: the title, nothing else. */
export function preGradeView(state: StudentAnswerState): { title: string } {
  return { title: state.title };
}
