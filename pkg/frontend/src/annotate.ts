import type { AdapterConfig } from "./config.js";
import type { CorpusDocument } from "./corpus.js";
import { readCorpus } from "./corpus.js";
import { createPipeline, type Pipeline } from "./registry.js";
import { writeAnnotations, type MentionRecord } from "./schema.js";

export interface AnnotateSummary {
  documents: number;
  mentions: number;
  linked: number;
  failed_documents: number;
}

/** Annotate one document's body: split, detect, link, classify.
 *
 * Spans are sentence-relative. A link is emitted only when its
 * log-likelihood is strictly greater than the threshold; otherwise the
 * mention stays unlinked (both link fields null).
 */
export function annotateDocument(
  doc: CorpusDocument,
  pipeline: Pipeline,
  linkThreshold: number
): MentionRecord[] {
  const records: MentionRecord[] = [];
  for (const sentence of pipeline.splitter.split(doc.body)) {
    for (const span of pipeline.ner.detect(sentence.text)) {
      const link = pipeline.linker.link(span.surface);
      const accepted = link !== null && link.logLikelihood > linkThreshold;
      const distribution = pipeline.tsc.classify(sentence.text, span);
      records.push({
        doc_id: doc.doc_id,
        sentence_index: sentence.index,
        start: span.start,
        end: span.end,
        surface: span.surface,
        entity_type: "person",
        kb_id: accepted ? link.kbId : null,
        link_log_likelihood: accepted ? link.logLikelihood : null,
        p_negative: distribution.pNegative,
        p_neutral: distribution.pNeutral,
        p_positive: distribution.pPositive,
      });
    }
  }
  return records;
}

export function annotateCorpus(
  docs: CorpusDocument[],
  pipeline: Pipeline,
  config: AdapterConfig
): { records: MentionRecord[]; failedDocuments: number } {
  const records: MentionRecord[] = [];
  let failedDocuments = 0;
  for (let offset = 0; offset < docs.length; offset += config.batchSize) {
    for (const doc of docs.slice(offset, offset + config.batchSize)) {
      try {
        records.push(...annotateDocument(doc, pipeline, config.linkThreshold));
      } catch (exc) {
        // per-document inference failures are logged and skipped, never fatal
        failedDocuments += 1;
        process.stderr.write(
          JSON.stringify({ error: "inference", doc_id: doc.doc_id, message: String(exc) }) + "\n"
        );
      }
    }
  }
  records.sort(
    (a, b) =>
      (a.doc_id < b.doc_id ? -1 : a.doc_id > b.doc_id ? 1 : 0) ||
      a.sentence_index - b.sentence_index ||
      a.start - b.start
  );
  return { records, failedDocuments };
}

export function runAnnotate(
  corpusPath: string,
  outPath: string,
  config: AdapterConfig
): AnnotateSummary {
  const docs = readCorpus(corpusPath);
  const pipeline = createPipeline(config);
  const { records, failedDocuments } = annotateCorpus(docs, pipeline, config);
  writeAnnotations(records, outPath);
  return {
    documents: docs.length,
    mentions: records.length,
    linked: records.filter((r) => r.kb_id !== null).length,
    failed_documents: failedDocuments,
  };
}
