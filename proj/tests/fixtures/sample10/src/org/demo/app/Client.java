package org.demo.app;

import org.demo.data.Database;
import org.demo.data.Repository;
import org.demo.security.AccessPolicy;
import org.demo.security.Grant;
import org.demo.security.Permission;
import org.demo.ui.MenuAction;
import org.demo.ui.SettingsDialog;
import org.demo.ui.Toolbar;

/** Wires the application together and runs a short session. */
public class Client {
    public static void main(String[] args) {
        Settings settings = new Settings();
        Database database = new Database();
        Repository repository = new Repository(database, "documents");
        AccessPolicy policy = new AccessPolicy();
        policy.addGrant(new Grant("alice", new Permission("documents", "*"), 0));

        Toolbar toolbar = new Toolbar();
        toolbar.addAction(new MenuAction("Save", "Ctrl+S"));
        toolbar.configure(settings);
        new SettingsDialog(settings).open();

        String user = MenuAction.getSettingOrDefault(settings, "client.user", "alice");
        if (policy.isAllowed(user, new Permission("documents", "write"), 0)) {
            repository.save("readme", "hello");
        }
    }
}
