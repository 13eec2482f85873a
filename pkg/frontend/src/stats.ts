/**
 * Class statistics dashboard rendering. Every number shown is a field
 * of the stats payload; the UI does no aggregation of its own beyond
 * proportional bar sizing.
 */

import { escapeHtml } from './highlight';
import type { ClassStats } from './types';

export function formatMean(value: number): string {
  return value.toFixed(2);
}

export function formatRate(value: number): string {
  return `${(value * 100).toFixed(0)}%`;
}

export function renderHistogram(histogram: number[]): string {
  const peak = Math.max(...histogram, 1);
  const bars = histogram
    .map((count, bin) => {
      const height = Math.round((count / peak) * 100);
      const label = `${bin * 10}-${bin * 10 + 10}%: ${count}`;
      return (
        `<div class="bar" data-bin="${bin}" data-count="${count}" ` +
        `style="height:${height}%" title="${label}"></div>`
      );
    })
    .join('');
  return `<div class="histogram">${bars}</div>`;
}

export function renderQuestionTable(
  stats: ClassStats,
  titles: Record<string, string> = {},
): string {
  const ids = Object.keys(stats.per_question).sort();
  if (ids.length === 0) {
    return '<p class="empty">No questions answered yet.</p>';
  }
  const rows = ids
    .map((id) => {
      const entry = stats.per_question[id];
      const title = escapeHtml(titles[id] ?? id);
      return (
        `<tr data-qid="${escapeHtml(id)}">` +
        `<td>${title}</td>` +
        `<td class="attempts">${entry.attempts}</td>` +
        `<td class="mean">${formatMean(entry.mean_normalized)}</td>` +
        `<td>${renderHistogram(entry.histogram)}</td>` +
        `</tr>`
      );
    })
    .join('');
  return (
    '<table class="question-stats">' +
    '<thead><tr><th>Question</th><th>Attempts</th><th>Mean</th><th>Scores</th></tr></thead>' +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderWeakestConcepts(stats: ClassStats): string {
  if (stats.weakest_concepts.length === 0) {
    return '<p class="empty">Not enough attempts yet (3 per concept needed).</p>';
  }
  const rows = stats.weakest_concepts
    .map(
      (row) =>
        `<tr><td>${escapeHtml(row.display)}</td>` +
        `<td class="rate">${formatRate(row.hit_rate)}</td>` +
        `<td>${row.attempts}</td></tr>`,
    )
    .join('');
  return (
    '<table class="weakest"><thead>' +
    '<tr><th>Concept</th><th>Hit rate</th><th>Attempts</th></tr></thead>' +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderDashboard(
  stats: ClassStats,
  titles: Record<string, string> = {},
): string {
  const empty = Object.keys(stats.per_question).length === 0;
  if (empty) {
    return (
      '<div class="zero-state">' +
      '<h2>No activity yet</h2>' +
      '<p>Statistics appear after students start answering questions.</p>' +
      '</div>'
    );
  }
  return (
    `<section class="per-question"><h2>Questions</h2>${renderQuestionTable(stats, titles)}</section>` +
    `<section class="weak-concepts"><h2>Weakest concepts</h2>${renderWeakestConcepts(stats)}</section>`
  );
}
