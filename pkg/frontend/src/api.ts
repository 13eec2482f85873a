/**
 * Thin fetch client for the engine's HTTP API. Every call carries the
 * bearer token; error bodies ({code, message}) become ApiError.
 */

import type {
  ClassRecord,
  ClassStats,
  ConceptEdit,
  CreateQuestionResponse,
  Question,
  QuestionSummary,
  SubmitResponse,
} from './types';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private token: string,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        method,
        headers: {
          Authorization: `Bearer ${this.token}`,
          ...(body !== undefined ? { 'Content-Type': 'application/json' } : {}),
        },
        body: body !== undefined ? JSON.stringify(body) : undefined,
      });
    } catch (err) {
      throw new ApiError(0, 'network', `request failed: ${String(err)}`);
    }
    if (!response.ok) {
      let code = 'error';
      let message = response.statusText;
      try {
        const payload = (await response.json()) as { code?: string; message?: string };
        code = payload.code ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  createClass(name: string, subject: string, roster: string[]): Promise<ClassRecord> {
    return this.request('POST', '/classes', { name, subject, roster });
  }

  createQuestion(classId: string, title: string, sources: string[]): Promise<CreateQuestionResponse> {
    return this.request('POST', `/classes/${classId}/questions`, { title, sources });
  }

  updateConcepts(questionId: string, edits: ConceptEdit[]): Promise<Question> {
    return this.request('PUT', `/questions/${questionId}/concepts`, { edits });
  }

  approveQuestion(questionId: string, drafts: number[] = []): Promise<{ question: Question; promoted: Question[] }> {
    return this.request('POST', `/questions/${questionId}/approve`, { drafts });
  }

  listQuestions(classId: string, role?: 'student'): Promise<Question[] | QuestionSummary[]> {
    const query = role ? `?role=${role}` : '';
    return this.request('GET', `/classes/${classId}/questions${query}`);
  }

  listStudentQuestions(classId: string): Promise<QuestionSummary[]> {
    return this.request('GET', `/classes/${classId}/questions?role=student`);
  }

  submitAnswer(questionId: string, transcript: string): Promise<SubmitResponse> {
    return this.request('POST', `/questions/${questionId}/answers`, { transcript });
  }

  recommendations(questionId: string): Promise<{ recommendations: string[] }> {
    return this.request('GET', `/questions/${questionId}/recommendations`);
  }

  stats(classId: string): Promise<ClassStats> {
    return this.request('GET', `/classes/${classId}/stats`);
  }

  selfStudy(title: string, sources: string[], subject?: string): Promise<CreateQuestionResponse> {
    return this.request('POST', '/selfstudy/questions', { title, sources, subject });
  }
}
