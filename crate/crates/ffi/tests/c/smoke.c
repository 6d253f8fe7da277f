#include <stdio.h>
#include <string.h>

#include "stackyfan.h"

int main(void) {
    SfResult *r = NULL;
    SfStatus s = sf_run("mass", "{\"groups\": [{\"order\": 2, \"table\": [[0, 1], [1, 0]]}]}", NULL, &r);
    if (s != SF_STATUS_OK || r == NULL) return 1;
    if (strcmp(sf_result_json(r), "{\"mass\":\"1/2\"}") != 0) return 2;
    sf_result_free(r);

    s = sf_run("frobnicate", "{}", NULL, &r);
    if (s != SF_STATUS_UNKNOWN_COMMAND || r != NULL || sf_last_error() == NULL) return 3;

    SfOptions *o = sf_options_new();
    if (sf_options_set_max_degree(o, 1) != SF_STATUS_OK) return 4;
    s = sf_run("group-homology", "{\"order\": 2, \"table\": [[0, 1], [1, 0]], \"identity\": 0}", o, &r);
    if (s != SF_STATUS_OK) return 5;
    sf_result_free(r);
    sf_options_free(o);
    puts(sf_version());
    return 0;
}
