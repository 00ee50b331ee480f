#include "multiiso.h"

#include <new>
#include <string>

#include "miso/runner.hpp"

struct miso_result {
  int code;
  std::string json;
};

extern "C" {

int miso_run(const char* command, const char* instance_json,
             const char* options_json, miso_result** out) {
  if (!out) return 2;
  *out = nullptr;
  try {
    miso::RunResult r = miso::run_command(
        command ? command : "", instance_json ? instance_json : "",
        options_json ? options_json : "");
    *out = new miso_result{r.code, std::move(r.json)};
    return (*out)->code;
  } catch (const std::bad_alloc&) {
    return 2;
  } catch (...) {
    try {
      *out = new miso_result{2, "{\"error\":\"unexpected failure\"}"};
    } catch (...) {
      *out = nullptr;
    }
    return 2;
  }
}

const char* miso_result_json(const miso_result* result) {
  return result ? result->json.c_str() : "";
}

int miso_result_code(const miso_result* result) {
  return result ? result->code : 2;
}

void miso_result_free(miso_result* result) { delete result; }

const char* miso_version(void) { return miso::version_string(); }

} // extern "C"
