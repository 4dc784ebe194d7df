/* Copyright 2026 The ehrqa Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "ehrqa/metrics.h"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ehrqa {
namespace {

struct Piece {
  std::optional<Span> span;
  std::u32string chars;  // as written, separators included
};

std::vector<Piece> pieces(const FinalAnswer& a, const std::string& separator) {
  std::vector<Piece> out;
  if (!a.answerable) return out;
  if (!a.parts.empty()) {
    for (const auto& p : a.parts) out.push_back({p.span, utf8::decode(p.text)});
    return out;
  }
  // Text-only answers: recover parts by splitting on the separator.
  std::string_view rest = a.text;
  while (true) {
    const auto pos = separator.empty() ? std::string_view::npos : rest.find(separator);
    out.push_back({std::nullopt, utf8::decode(rest.substr(0, pos))});
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + separator.size());
  }
  return out;
}

std::size_t count_kept(std::u32string_view chars, const CharSet& dropped) {
  return static_cast<std::size_t>(std::count_if(
      chars.begin(), chars.end(), [&](char32_t c) { return dropped.count(c) == 0; }));
}

std::size_t multiset_overlap(std::u32string_view a, std::u32string_view b,
                             const CharSet& dropped) {
  std::unordered_map<char32_t, long> counts;
  for (char32_t c : a) {
    if (dropped.count(c) == 0) ++counts[c];
  }
  std::size_t tp = 0;
  for (char32_t c : b) {
    if (dropped.count(c) == 0 && counts[c] > 0) {
      --counts[c];
      ++tp;
    }
  }
  return tp;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> Counts::f1() const {
  const std::size_t den = 2 * tp + fp + fn;
  if (den == 0) return std::nullopt;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(den);
}

int exact_match(const FinalAnswer& pred, const FinalAnswer& gold) {
  if (pred.answerable != gold.answerable) return 0;
  if (!pred.answerable) return 1;
  return pred.text == gold.text ? 1 : 0;
}

Counts token_counts_qa(const FinalAnswer& pred, const FinalAnswer& gold,
                       const std::string& separator) {
  const CharSet dropped = utf8::to_charset(separator);
  const auto p = pieces(pred, separator);
  const auto g = pieces(gold, separator);
  Counts c;
  const std::size_t aligned = std::min(p.size(), g.size());
  for (std::size_t i = 0; i < aligned; ++i) {
    const std::size_t np = count_kept(p[i].chars, dropped);
    const std::size_t ng = count_kept(g[i].chars, dropped);
    std::size_t tp = 0;
    const bool positional = p[i].span && g[i].span &&
                            p[i].span->length() == p[i].chars.size() &&
                            g[i].span->length() == g[i].chars.size();
    if (positional) {
      const std::size_t lo = std::max(p[i].span->start, g[i].span->start);
      const std::size_t hi = std::min(p[i].span->end, g[i].span->end);
      if (lo < hi) {
        tp = count_kept(std::u32string_view(p[i].chars).substr(lo - p[i].span->start, hi - lo),
                        dropped);
      }
    } else {
      tp = multiset_overlap(p[i].chars, g[i].chars, dropped);
    }
    c.tp += tp;
    c.fp += np - tp;
    c.fn += ng - tp;
  }
  for (std::size_t i = aligned; i < p.size(); ++i) c.fp += count_kept(p[i].chars, dropped);
  for (std::size_t i = aligned; i < g.size(); ++i) c.fn += count_kept(g[i].chars, dropped);
  return c;
}

std::optional<F1Result> token_f1_qa(const std::vector<EvalItem>& items,
                                    const std::string& separator) {
  if (items.empty()) return std::nullopt;
  F1Result r;
  for (const auto& item : items) r.counts += token_counts_qa(item.predicted, item.gold, separator);
  r.f1 = r.counts.f1();
  return r;
}

Counts token_counts_ner(const std::vector<TypedSpan>& pred,
                        const std::vector<TypedSpan>& gold, std::size_t doc_length) {
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t j = i + 1; j < gold.size(); ++j) {
      if (gold[i].type == gold[j].type && gold[i].span.overlaps(gold[j].span)) {
        throw ValidationError("ill-formed gold: overlapping '" + gold[i].type +
                              "' spans " + to_string(gold[i].span) + " and " +
                              to_string(gold[j].span));
      }
    }
  }
  using Label = std::pair<std::size_t, std::string>;
  auto labels = [&](const std::vector<TypedSpan>& spans) {
    std::set<Label> out;
    for (const auto& s : spans) {
      check_span(s.span, doc_length);
      for (std::size_t p = s.span.start; p < s.span.end; ++p) out.insert({p, s.type});
    }
    return out;
  };
  const auto p = labels(pred);
  const auto g = labels(gold);
  Counts c;
  for (const auto& l : p) {
    if (g.count(l) > 0) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = g.size() - c.tp;
  return c;
}

F1Result token_f1_ner(const std::vector<TypedSpan>& pred,
                      const std::vector<TypedSpan>& gold, std::size_t doc_length) {
  F1Result r;
  r.counts = token_counts_ner(pred, gold, doc_length);
  r.f1 = r.counts.f1();
  return r;
}

std::optional<double> answerability_accuracy(const std::vector<EvalItem>& items) {
  std::size_t correct = 0;
  for (const auto& item : items) {
    if (item.predicted.answerable == item.gold.answerable) ++correct;
  }
  return ratio(correct, items.size());
}

std::optional<double> EvalSlice::em() const { return ratio(exact, items); }
std::optional<double> EvalSlice::accuracy() const { return ratio(answerable_correct, items); }

EvalReport evaluate(const std::vector<EvalItem>& items, const std::string& separator) {
  EvalReport r;
  r.items = items.size();
  std::vector<EvalItem> relation;
  for (const auto& item : items) {
    const int em = exact_match(item.predicted, item.gold);
    const bool agree = item.predicted.answerable == item.gold.answerable;
    r.exact += em;
    r.answerable_correct += agree ? 1 : 0;

    Counts c;
    if (item.task == Task::kNer) {
      std::vector<TypedSpan> p, g;
      std::size_t len = 0;
      for (const auto& part : item.predicted.parts) {
        p.push_back({part.span, item.category});
        len = std::max(len, part.span.end);
      }
      for (const auto& part : item.gold.parts) {
        g.push_back({part.span, item.category});
        len = std::max(len, part.span.end);
      }
      c = token_counts_ner(p, g, len);
      r.ner_counts += c;
    } else {
      c = token_counts_qa(item.predicted, item.gold, separator);
      r.qa_counts += c;
    }
    EvalSlice& slice = r.breakdown[item.category];
    ++slice.items;
    slice.exact += em;
    slice.answerable_correct += agree ? 1 : 0;
    slice.counts += c;
  }
  r.em = ratio(r.exact, r.items);
  r.answerability_accuracy = ratio(r.answerable_correct, r.items);
  r.f1 = r.qa_counts.f1();
  r.ner_f1 = r.ner_counts.f1();
  return r;
}

std::vector<EvalItem> align_records(const std::vector<ExtractionRecord>& predictions,
                                    const std::vector<ExtractionRecord>& gold,
                                    Diagnostics* diags) {
  std::unordered_map<std::string, const ExtractionRecord*> by_qid;
  for (const auto& p : predictions) by_qid.emplace(p.qid, &p);
  std::set<std::string> gold_qids;
  std::vector<EvalItem> items;
  std::size_t missing = 0;

  auto empty_like = [](const ExtractionRecord& r) {
    FinalAnswer a;
    a.question = r.key;
    a.doc_id = r.doc_id;
    return a;
  };
  for (const auto& g : gold) {
    gold_qids.insert(g.qid);
    EvalItem item{g.qid, empty_like(g), g.value, g.task, g.category};
    if (auto it = by_qid.find(g.qid); it != by_qid.end()) {
      item.predicted = it->second->value;
    } else {
      ++missing;
    }
    items.push_back(std::move(item));
  }
  if (missing > 0) {
    report(diags, "missing-predictions",
           std::to_string(missing) + " gold questions have no prediction; scored as unanswerable");
  }
  for (const auto& p : predictions) {
    if (gold_qids.count(p.qid) > 0) continue;
    gold_qids.insert(p.qid);
    items.push_back({p.qid, p.value, empty_like(p), p.task, p.category});
  }
  return items;
}

nlohmann::json report_to_json(const EvalReport& r) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  auto counts = [](const Counts& c) {
    return nlohmann::json{{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
  };
  nlohmann::json breakdown = nlohmann::json::object();
  for (const auto& [name, s] : r.breakdown) {
    breakdown[name] = {{"items", s.items},
                       {"em", opt(s.em())},
                       {"f1", opt(s.counts.f1())},
                       {"answerability_accuracy", opt(s.accuracy())},
                       {"counts", counts(s.counts)}};
  }
  return {{"em", opt(r.em)},
          {"f1", opt(r.f1)},
          {"ner_f1", opt(r.ner_f1)},
          {"answerability_accuracy", opt(r.answerability_accuracy)},
          {"counts",
           {{"items", r.items},
            {"exact", r.exact},
            {"answerable_correct", r.answerable_correct},
            {"tp", r.qa_counts.tp},
            {"fp", r.qa_counts.fp},
            {"fn", r.qa_counts.fn},
            {"ner", counts(r.ner_counts)}}},
          {"breakdown", std::move(breakdown)}};
}

std::string format_report(const EvalReport& r) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << *v;
    return os.str();
  };
  std::ostringstream os;
  os << std::left << std::setw(32) << "category" << std::setw(8) << "items"
     << std::setw(10) << "EM" << std::setw(10) << "F1" << "answerability\n";
  for (const auto& [name, s] : r.breakdown) {
    os << std::setw(32) << name << std::setw(8) << s.items << std::setw(10) << cell(s.em())
       << std::setw(10) << cell(s.counts.f1()) << cell(s.accuracy()) << '\n';
  }
  os << std::setw(32) << "overall" << std::setw(8) << r.items << std::setw(10) << cell(r.em)
     << std::setw(10) << cell(r.f1) << cell(r.answerability_accuracy) << '\n';
  os << "NER token F1: " << cell(r.ner_f1) << "  (tp=" << r.ner_counts.tp
     << " fp=" << r.ner_counts.fp << " fn=" << r.ner_counts.fn << ")\n";
  os << "QA token F1:  " << cell(r.f1) << "  (tp=" << r.qa_counts.tp
     << " fp=" << r.qa_counts.fp << " fn=" << r.qa_counts.fn << ")\n";
  return os.str();
}

}  // namespace ehrqa
