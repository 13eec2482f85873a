/**
 * Matched-token highlighting. Highlights derive solely from
 * AnswerResult.matched token indices; the UI never re-tokenizes or
 * re-matches the transcript.
 */

import type { AnswerResult } from './types';

export interface HighlightToken {
  index: number;
  text: string;
  matched: boolean;
  concepts: string[];
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function matchedIndexSet(result: AnswerResult): Set<number> {
  const indices = new Set<number>();
  for (const match of result.matched) {
    for (const index of match.token_indices) {
      indices.add(index);
    }
  }
  return indices;
}

export function highlightTokens(result: AnswerResult): HighlightToken[] {
  const conceptsByIndex = new Map<number, string[]>();
  for (const match of result.matched) {
    for (const index of match.token_indices) {
      const entry = conceptsByIndex.get(index) ?? [];
      entry.push(match.display);
      conceptsByIndex.set(index, entry);
    }
  }
  return result.tokens.map((text, index) => ({
    index,
    text,
    matched: conceptsByIndex.has(index),
    concepts: conceptsByIndex.get(index) ?? [],
  }));
}

export function renderTranscript(result: AnswerResult): string {
  const parts = highlightTokens(result).map((token) => {
    const text = escapeHtml(token.text);
    if (!token.matched) {
      return `<span class="tok" data-idx="${token.index}">${text}</span>`;
    }
    const title = escapeHtml(token.concepts.join(', '));
    return `<mark class="tok hit" data-idx="${token.index}" title="${title}">${text}</mark>`;
  });
  return parts.join(' ');
}

export function renderScore(result: AnswerResult): string {
  return (
    `<div class="score">` +
    `<strong>${result.total_score.toFixed(2)}</strong> / ${result.max_score.toFixed(2)}` +
    ` <span class="pct">(${(result.normalized * 100).toFixed(0)}%)</span>` +
    `</div>`
  );
}

export function renderRecommendations(
  recommendations: string[],
  titles: Record<string, string> = {},
): string {
  if (recommendations.length === 0) {
    return '<p class="empty">No related questions yet.</p>';
  }
  const items = recommendations.map((id) => {
    const label = escapeHtml(titles[id] ?? id);
    return `<li><a href="#/answer/${encodeURIComponent(id)}" data-qid="${escapeHtml(id)}">${label}</a></li>`;
  });
  return `<ol class="recommendations">${items.join('')}</ol>`;
}
