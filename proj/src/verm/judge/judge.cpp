#include "verm/judge/judge.hpp"

#include "verm/core/parallel.hpp"
#include "verm/judge/diff.hpp"

namespace verm {

JudgeVerdict oracle_judge(const JudgeInput& input) {
  if (!input.gt_doc || !input.pred_doc) throw DataError("oracle requires specs");
  if (input.gt_doc->task != input.task) throw DataError("oracle: gt doc task does not match the input task");
  return {diff_docs(*input.gt_doc, *input.pred_doc), std::nullopt};
}

std::vector<JudgeOutcome> judge_all(Judge& judge, std::span<const JudgeInput> inputs, std::size_t max_parallel) {
  std::vector<JudgeOutcome> out(inputs.size());
  parallel_for(inputs.size(), max_parallel, [&](std::size_t i) {
    try {
      out[i].verdict = judge.judge(inputs[i]);
    } catch (const AbortedError&) {
      throw;
    } catch (const MalformedOutput& e) {
      out[i].error_kind = e.kind();
      out[i].error = e.what();
      out[i].raw = e.raw();
    } catch (const Error& e) {
      out[i].error_kind = e.kind();
      out[i].error = e.what();
    }
  });
  return out;
}

}  // namespace verm
