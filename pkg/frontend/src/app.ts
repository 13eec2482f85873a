/**
 * Single-page application wiring: hash routing, session state, and DOM
 * event handling around the pure render/state modules. All data comes
 * from the JSON API; optimistic UI stays off.
 */

import { ApiClient, ApiError } from './api';
import {
  appendDictation,
  beginSubmit,
  initAnswer,
  needsEmptyConfirmation,
  preGradeView,
  setTranscript,
  StudentAnswerState,
  submitFailed,
  submitSucceeded,
} from './answer';
import {
  escapeHtml,
  renderRecommendations,
  renderScore,
  renderTranscript,
} from './highlight';
import {
  addConcept,
  approvedDraftIndices,
  buildEdits,
  canSave,
  editScore,
  initReview,
  rowError,
  shouldWarnOnLeave,
  TeacherReviewState,
  toggleDraft,
  toggleRemove,
} from './review';
import { createSpeechCapture } from './speech';
import { renderDashboard } from './stats';
import type { Question, QuestionSummary } from './types';

interface Session {
  client: ApiClient;
  role: 'teacher' | 'student';
  baseUrl: string;
  token: string;
}

let session: Session | null = null;
let reviewState: TeacherReviewState | null = null;
let answerState: StudentAnswerState | null = null;
const questionTitles: Record<string, string> = {};
const speech = createSpeechCapture();

function el(): HTMLElement {
  return document.getElementById('app')!;
}

function renderError(err: unknown): string {
  if (err instanceof ApiError) {
    return `<p class="error">${escapeHtml(`${err.code}: ${err.message}`)}</p>`;
  }
  return `<p class="error">${escapeHtml(String(err))}</p>`;
}

function renderLogin(message = ''): void {
  el().innerHTML = `
    <h1>tutorengine</h1>
    ${message}
    <form id="login">
      <label>API URL <input name="base" value="${escapeHtml(localStorage.getItem('base') ?? 'http://127.0.0.1:8000')}"></label>
      <label>Access token <input name="token" value=""></label>
      <label>Role
        <select name="role">
          <option value="teacher">teacher</option>
          <option value="student">student</option>
        </select>
      </label>
      <label>Class id <input name="class" value="${escapeHtml(localStorage.getItem('class') ?? '')}"></label>
      <button type="submit">Enter</button>
    </form>`;
  document.getElementById('login')!.addEventListener('submit', (event) => {
    event.preventDefault();
    const data = new FormData(event.target as HTMLFormElement);
    const base = String(data.get('base'));
    const token = String(data.get('token'));
    const role = String(data.get('role')) as Session['role'];
    const classId = String(data.get('class'));
    localStorage.setItem('base', base);
    localStorage.setItem('class', classId);
    session = { client: new ApiClient(base, token), role, baseUrl: base, token };
    location.hash = role === 'teacher' ? `#/teacher/${classId}` : `#/student/${classId}`;
  });
}

async function renderTeacherClass(classId: string): Promise<void> {
  const client = requireSession().client;
  try {
    const questions = (await client.listQuestions(classId)) as Question[];
    for (const q of questions) {
      questionTitles[q.id] = q.title;
    }
    const rows = questions
      .map(
        (q) =>
          `<tr><td>${escapeHtml(q.title)}</td>` +
          `<td>${q.approved ? 'approved' : 'draft'}</td>` +
          `<td><a href="#/review/${q.id}">review</a></td></tr>`,
      )
      .join('');
    el().innerHTML = `
      <h1>Class ${escapeHtml(classId)}</h1>
      <p><a href="#/stats/${classId}">statistics dashboard</a></p>
      <table><thead><tr><th>Question</th><th>State</th><th></th></tr></thead>
      <tbody>${rows}</tbody></table>
      <h2>New question</h2>
      <form id="new-question">
        <label>Title <input name="title"></label>
        <label>Sources (one text block or URL per line)
          <textarea name="sources" rows="6"></textarea></label>
        <button type="submit">Extract concepts</button>
      </form>`;
    document.getElementById('new-question')!.addEventListener('submit', async (event) => {
      event.preventDefault();
      const data = new FormData(event.target as HTMLFormElement);
      const sources = String(data.get('sources'))
        .split('\n')
        .map((s) => s.trim())
        .filter(Boolean);
      try {
        const created = await client.createQuestion(classId, String(data.get('title')), sources);
        location.hash = `#/review/${created.question.id}`;
      } catch (err) {
        el().insertAdjacentHTML('beforeend', renderError(err));
      }
    });
  } catch (err) {
    el().innerHTML = renderError(err);
  }
}

function reviewRowsHtml(state: TeacherReviewState): string {
  return state.rows
    .map((row, i) => {
      const error = rowError(row);
      return (
        `<tr class="${row.remove ? 'removed' : ''}">` +
        `<td>${escapeHtml(row.display)}</td>` +
        `<td><input data-row="${i}" class="score" value="${escapeHtml(row.scoreField)}" ${row.remove ? 'disabled' : ''}></td>` +
        `<td><button data-remove="${i}">${row.remove ? 'restore' : 'delete'}</button></td>` +
        `<td class="row-error">${error ? escapeHtml(error) : ''}</td></tr>`
      );
    })
    .join('');
}

async function renderReview(questionId: string): Promise<void> {
  const client = requireSession().client;
  try {
    const questions = (await client.listQuestions(
      (await questionClass(questionId)) ?? '',
    )) as Question[];
    const question = questions.find((q) => q.id === questionId);
    if (!question) {
      el().innerHTML = '<p class="error">question not found</p>';
      return;
    }
    reviewState = initReview(question);
    drawReview(questionId);
  } catch (err) {
    el().innerHTML = renderError(err);
  }
}

async function questionClass(questionId: string): Promise<string | null> {
  // the hash only carries the question id; the class id is remembered
  return localStorage.getItem('class');
}

function drawReview(questionId: string): void {
  const state = reviewState!;
  const drafts = state.drafts
    .map(
      (draft, i) =>
        `<li><label><input type="checkbox" data-draft="${i}" ${draft.approve ? 'checked' : ''}>` +
        ` ${escapeHtml(draft.text)}</label></li>`,
    )
    .join('');
  el().innerHTML = `
    <h1>Concept review</h1>
    <table><thead><tr><th>Concept</th><th>Score</th><th></th><th></th></tr></thead>
    <tbody id="rows">${reviewRowsHtml(state)}</tbody></table>
    <form id="add-concept">
      <input name="phrase" placeholder="new concept">
      <input name="score" placeholder="score" size="6">
      <button type="submit">Add</button>
    </form>
    <h2>Drafted questions</h2>
    <ul>${drafts.length ? drafts : '<li class="empty">none</li>'}</ul>
    <button id="save" ${canSave(state) ? '' : 'disabled'}>Save &amp; approve</button>
    <p id="review-status"></p>`;

  el().querySelectorAll<HTMLInputElement>('input.score').forEach((input) => {
    input.addEventListener('input', () => {
      reviewState = editScore(reviewState!, Number(input.dataset.row), input.value);
      refreshSaveButton();
    });
  });
  el().querySelectorAll<HTMLButtonElement>('button[data-remove]').forEach((button) => {
    button.addEventListener('click', () => {
      reviewState = toggleRemove(reviewState!, Number(button.dataset.remove));
      drawReview(questionId);
    });
  });
  el().querySelectorAll<HTMLInputElement>('input[data-draft]').forEach((box) => {
    box.addEventListener('change', () => {
      reviewState = toggleDraft(reviewState!, Number(box.dataset.draft));
    });
  });
  document.getElementById('add-concept')!.addEventListener('submit', (event) => {
    event.preventDefault();
    const data = new FormData(event.target as HTMLFormElement);
    reviewState = addConcept(reviewState!, String(data.get('phrase')), String(data.get('score')));
    drawReview(questionId);
  });
  document.getElementById('save')!.addEventListener('click', async () => {
    const client = requireSession().client;
    const status = document.getElementById('review-status')!;
    try {
      const edits = buildEdits(reviewState!);
      if (edits.length > 0) {
        await client.updateConcepts(questionId, edits);
      }
      await client.approveQuestion(questionId, approvedDraftIndices(reviewState!));
      reviewState = { ...reviewState!, dirty: false };
      status.textContent = 'saved and approved';
    } catch (err) {
      status.innerHTML = renderError(err);
    }
  });
}

function refreshSaveButton(): void {
  const save = document.getElementById('save') as HTMLButtonElement | null;
  if (save && reviewState) {
    save.disabled = !canSave(reviewState);
  }
  el().querySelectorAll<HTMLTableRowElement>('#rows tr').forEach((tr, i) => {
    const cell = tr.querySelector('.row-error');
    if (cell && reviewState) {
      const error = rowError(reviewState.rows[i]);
      cell.textContent = error ?? '';
    }
  });
}

async function renderStudentClass(classId: string): Promise<void> {
  const client = requireSession().client;
  try {
    const questions = await client.listStudentQuestions(classId);
    questions.forEach((q: QuestionSummary) => {
      questionTitles[q.id] = q.title;
    });
    const items = questions
      .map((q) => `<li><a href="#/answer/${q.id}">${escapeHtml(q.title)}</a></li>`)
      .join('');
    el().innerHTML = `
      <h1>Questions</h1>
      <ul>${items || '<li class="empty">nothing published yet</li>'}</ul>`;
  } catch (err) {
    el().innerHTML = renderError(err);
  }
}

function drawAnswer(): void {
  const state = answerState!;
  if (state.phase === 'graded' && state.result) {
    el().innerHTML = `
      <h1>${escapeHtml(state.title)}</h1>
      ${renderScore(state.result)}
      <p class="feedback">${renderTranscript(state.result)}</p>
      <h2>Keep going</h2>
      ${renderRecommendations(state.recommendations, questionTitles)}`;
    return;
  }
  const view = preGradeView(state);
  el().innerHTML = `
    <h1>${escapeHtml(view.title)}</h1>
    ${state.error ? `<p class="error">${escapeHtml(state.error)} — your answer is kept below.</p>` : ''}
    <form id="answer">
      <textarea name="transcript" rows="6">${escapeHtml(state.transcript)}</textarea>
      <div>
        ${speech.supported ? '<button type="button" id="dictate">Dictate</button>' : ''}
        <button type="submit" ${state.phase === 'submitting' ? 'disabled' : ''}>Submit answer</button>
      </div>
    </form>`;
  const textarea = el().querySelector('textarea')!;
  textarea.addEventListener('input', () => {
    answerState = setTranscript(answerState!, textarea.value);
  });
  const dictate = document.getElementById('dictate');
  dictate?.addEventListener('click', () => {
    speech.start((text) => {
      answerState = appendDictation(answerState!, text);
      textarea.value = answerState.transcript;
    });
  });
  document.getElementById('answer')!.addEventListener('submit', async (event) => {
    event.preventDefault();
    const client = requireSession().client;
    if (needsEmptyConfirmation(answerState!) && !window.confirm('Submit an empty answer? It will be graded 0.')) {
      return;
    }
    speech.stop();
    answerState = beginSubmit(answerState!);
    drawAnswer();
    try {
      const response = await client.submitAnswer(answerState!.questionId, answerState!.transcript);
      answerState = submitSucceeded(answerState!, response);
    } catch (err) {
      answerState = submitFailed(
        answerState!,
        err instanceof ApiError ? `${err.code}: ${err.message}` : String(err),
      );
    }
    drawAnswer();
  });
}

async function renderAnswer(questionId: string): Promise<void> {
  answerState = initAnswer(questionId, questionTitles[questionId] ?? questionId);
  drawAnswer();
}

async function renderStats(classId: string): Promise<void> {
  const client = requireSession().client;
  try {
    const stats = await client.stats(classId);
    el().innerHTML = `<h1>Class statistics</h1>${renderDashboard(stats, questionTitles)}`;
  } catch (err) {
    el().innerHTML = renderError(err);
  }
}

function requireSession(): Session {
  if (!session) {
    location.hash = '#/login';
    throw new Error('not logged in');
  }
  return session;
}

function route(): void {
  if (reviewState && shouldWarnOnLeave(reviewState)) {
    if (!window.confirm('Discard unsaved concept edits?')) {
      return;
    }
    reviewState = null;
  }
  const hash = location.hash || '#/login';
  const [, page, arg] = hash.split('/');
  if (!session && page !== 'login') {
    renderLogin();
    return;
  }
  const teacherPages = new Set(['teacher', 'review', 'stats']);
  if (session && session.role !== 'teacher' && teacherPages.has(page)) {
    location.hash = `#/student/${localStorage.getItem('class') ?? ''}`;
    return;
  }
  switch (page) {
    case 'teacher':
      void renderTeacherClass(arg);
      break;
    case 'review':
      void renderReview(arg);
      break;
    case 'student':
      void renderStudentClass(arg);
      break;
    case 'answer':
      void renderAnswer(arg);
      break;
    case 'stats':
      void renderStats(arg);
      break;
    default:
      renderLogin();
  }
}

window.addEventListener('hashchange', route);
window.addEventListener('beforeunload', (event) => {
  if (reviewState && shouldWarnOnLeave(reviewState)) {
    event.preventDefault();
  }
});
route();
