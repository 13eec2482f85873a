/**
 * Mirrors of the service's JSON payloads. The UI renders these verbatim;
 * it never recomputes scores or rankings on its own.
 */

export interface ConceptScore {
  stems: string[];
  display: string;
  score: number;
  in_kc: boolean;
  in_ne: boolean;
  teacher_edited: boolean;
  content_stems: string[];
}

export interface MatchedConcept {
  display: string;
  stems: string[];
  score: number;
  token_indices: number[];
}

export interface AnswerResult {
  question_id: string;
  transcript: string;
  tokens: string[];
  matched: MatchedConcept[];
  total_score: number;
  max_score: number;
  normalized: number;
}

export interface DraftQuestion {
  text: string;
  source_sentence: string;
  sentence_score: number;
  target_concept: ConceptScore;
  approved: boolean;
}

export interface Question {
  id: string;
  class_id: string;
  title: string;
  sources: string[];
  concepts: ConceptScore[];
  drafts: DraftQuestion[];
  embedding: { vector: number[]; model_version: string } | null;
  approved: boolean;
  generated: boolean;
  owner: string | null;
  created_at: string;
}

export interface QuestionSummary {
  id: string;
  title: string;
}

export interface ClassRecord {
  id: string;
  name: string;
  subject: string;
  roster: string[];
}

export interface SubmitResponse {
  result: AnswerResult;
  recommendations: string[];
}

export interface QuestionStats {
  attempts: number;
  mean_normalized: number;
  histogram: number[];
}

export interface ConceptStats {
  display: string;
  attempts: number;
  hits: number;
  hit_rate: number;
}

export interface WeakConcept {
  concept: string;
  display: string;
  hit_rate: number;
  attempts: number;
}

export interface ClassStats {
  class_id: string;
  per_question: Record<string, QuestionStats>;
  per_concept: Record<string, ConceptStats>;
  weakest_concepts: WeakConcept[];
}

export type ConceptEdit =
  | { action: 'set'; stems: string[]; score: number }
  | { action: 'delete'; stems: string[] }
  | { action: 'add'; phrase: string; score: number };

export interface CreateQuestionResponse {
  question: Question;
  warnings: { source: string; error: string }[];
}
